"""Trackside deployment: balise payloads, telegram programming, attacks.

Each balise stores one telegram whose user data encodes the balise id,
its kind (fixed position reference or controlled stop marker), and the
reported location.  Attacks transform the deployed telegrams the way a
trackside adversary would: tampering re-encodes modified user data in
legacy mode (the attacker holds no keys), cloning copies a valid
telegram bit-for-bit onto another balise, and an availability attack
suppresses transmission entirely.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .. import auth, codec
from ..bits import bits_to_int, bits_to_str, int_to_bits, str_to_bits

KIND_FIXED = "fixed"
KIND_CONTROLLED = "controlled"
_KIND_CODE = {KIND_FIXED: 0, KIND_CONTROLLED: 1}
_CODE_KIND = {v: k for k, v in _KIND_CODE.items()}

_LOC_BITS = 48  # reported location in signed millimeters


@dataclass(frozen=True)
class BaliseSpec:
    id: int
    loc: float
    kind: str

    def __post_init__(self):
        if not 0 <= self.id < (1 << auth.ID_BITS):
            raise ValueError("balise id must be a 14-bit value")
        if self.kind not in _KIND_CODE:
            raise ValueError(f"unknown balise kind {self.kind!r}")


def pack_payload(balise_id: int, kind: str, loc: float,
                 fmt: codec.TelegramFormat) -> list[int]:
    """User bits: id (14) | kind (2) | loc in signed mm (48) | zero pad."""
    loc_mm = round(loc * 1000.0)
    if not -(1 << (_LOC_BITS - 1)) <= loc_mm < (1 << (_LOC_BITS - 1)):
        raise ValueError("location out of range")
    bits = int_to_bits(balise_id, auth.ID_BITS)
    bits += int_to_bits(_KIND_CODE[kind], 2)
    bits += int_to_bits(loc_mm & ((1 << _LOC_BITS) - 1), _LOC_BITS)
    return bits + [0] * (fmt.user_bits - len(bits))


def parse_payload(user_bits: list[int]) -> tuple[int, str, float]:
    """Inverse of pack_payload; returns (id, kind, loc)."""
    balise_id = bits_to_int(user_bits[:14])
    kind_code = bits_to_int(user_bits[14:16])
    raw = bits_to_int(user_bits[16 : 16 + _LOC_BITS])
    if raw >= 1 << (_LOC_BITS - 1):
        raw -= 1 << _LOC_BITS
    kind = _CODE_KIND.get(kind_code)
    if kind is None:
        raise ValueError(f"unknown kind code {kind_code}")
    return balise_id, kind, raw / 1000.0


AUTH_LEGACY = "legacy"
AUTH_AUTHENTICATED = "authenticated"

# sb used when programming legacy telegrams; carries no security.
LEGACY_SB = 0x555


@dataclass
class DeployedBalise:
    spec: BaliseSpec
    telegram: list[int] | None  # None: transmission suppressed


def program_telegram(
    spec: BaliseSpec,
    auth_mode: str,
    keystore: auth.Keystore | None,
    fmt: codec.TelegramFormat,
    loc_reported: float | None = None,
) -> list[int]:
    """Encode the telegram a (honest) programming tool would write."""
    loc = spec.loc if loc_reported is None else loc_reported
    user = pack_payload(spec.id, spec.kind, loc, fmt)
    if auth_mode == AUTH_AUTHENTICATED:
        if keystore is None:
            raise ValueError("authenticated deployment needs a keystore")
        return auth.encode_authenticated(user, keystore.keys_for(spec.id), fmt)
    return codec.encode_legacy(user, LEGACY_SB, fmt)


def build_deployment(
    balises: list[BaliseSpec],
    auth_mode: str,
    keystore: auth.Keystore | None,
    fmt: codec.TelegramFormat,
) -> list[DeployedBalise]:
    return [
        DeployedBalise(spec, program_telegram(spec, auth_mode, keystore, fmt))
        for spec in balises
    ]


def save_telegram(path: str, bits: list[int],
                  fmt: codec.TelegramFormat) -> None:
    """Telegram file: JSON with the format name and the bits as text."""
    with open(path, "w", encoding="utf-8") as f:
        json.dump({"format": fmt.name, "bits": bits_to_str(bits)}, f)
        f.write("\n")


def load_telegram(path: str) -> tuple[codec.TelegramFormat, list[int]]:
    with open(path, encoding="utf-8") as f:
        raw = json.load(f)
    try:
        fmt = codec.FORMATS[raw["format"]]
        bits = str_to_bits(raw["bits"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed telegram file {path}: {exc}") from exc
    if len(bits) != fmt.n:
        raise ValueError(
            f"telegram file {path}: {len(bits)} bits, {fmt.name} needs {fmt.n}")
    return fmt, bits


# ---------------------------------------------------------------------------
# Attacks (balise numbers are 1-based, matching B_1 .. B_m)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Tamper:
    balise: int
    new_loc: float


@dataclass(frozen=True)
class Clone:
    src: int
    dst: int


@dataclass(frozen=True)
class Unavailable:
    balise: int


AttackSpec = Tamper | Clone | Unavailable


def apply_attacks(deployment: list[DeployedBalise],
                  attacks: list[AttackSpec],
                  fmt: codec.TelegramFormat) -> None:
    """Mutate the deployment in place as the adversary would."""
    for attack in attacks:
        if isinstance(attack, Tamper):
            target = deployment[attack.balise - 1]
            # The attacker rewrites the location and re-encodes with the
            # public legacy scrambling rule, reusing the observed sb; it
            # cannot produce a valid tag without keys.
            user = pack_payload(target.spec.id, target.spec.kind,
                                attack.new_loc, fmt)
            sb = LEGACY_SB
            if target.telegram is not None:
                base = fmt.shaped_bits + codec.CB_WIDTH
                sb = bits_to_int(target.telegram[base : base + codec.SB_WIDTH])
            target.telegram = codec.encode_legacy(user, sb, fmt)
        elif isinstance(attack, Clone):
            src = deployment[attack.src - 1].telegram
            deployment[attack.dst - 1].telegram = None if src is None else list(src)
        elif isinstance(attack, Unavailable):
            deployment[attack.balise - 1].telegram = None
        else:
            raise TypeError(f"unknown attack {attack!r}")
