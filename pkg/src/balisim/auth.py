"""Device-level telegram authentication via the sb and S fields.

The 12-bit scrambling-bits field doubles as a truncated MAC over the
user data, and the 32-bit scrambling key becomes a truncated PRF of the
tag, so authenticated telegrams keep the exact legacy bit layout.  KDF,
MAC and PRF are all instantiated as HMAC over SHA-256 with
domain-separating leading message bytes:

    0x4B | id (2 bytes BE) | ver (2 bytes BE) | i      key derivation
    fmt byte (0x01 long / 0x02 short) | packed U       tag MAC
    0x53 | sb left-aligned in 2 bytes                  scrambling PRF

"first k bits" always means the k most significant bits of the digest
read big-endian.  Per-balise keys are re-derived from the master key on
demand and never persisted; the keystore holds only mk and a version.
"""

from __future__ import annotations

import hashlib
import hmac
import json
import secrets
from dataclasses import dataclass

from . import codec
from .bits import bits_to_bytes

KEY_BYTES = 16
ID_BITS = 14
VER_BITS = 16

_KDF_PREFIX = b"\x4b"
_PRF_PREFIX = b"\x53"
_FORMAT_BYTE = {"long": b"\x01", "short": b"\x02"}


class AuthFailure(Exception):
    """Tag verification failed: tampered data or wrong keys."""


@dataclass(frozen=True)
class BaliseKeyPair:
    k0: bytes  # tag MAC key
    k1: bytes  # scrambling PRF key
    id: int
    ver: int


def _hmac256(key: bytes, msg: bytes) -> bytes:
    return hmac.new(key, msg, hashlib.sha256).digest()


def derive_keys(mk: bytes, balise_id: int, ver: int = 0) -> BaliseKeyPair:
    """Derive the per-balise key pair from the 256-bit master key."""
    if len(mk) != 32:
        raise ValueError("master key must be 32 bytes")
    if not 0 <= balise_id < (1 << ID_BITS):
        raise ValueError("balise id must be a 14-bit value")
    if not 0 <= ver < (1 << VER_BITS):
        raise ValueError("ver must be a 16-bit value")
    base = _KDF_PREFIX + balise_id.to_bytes(2, "big") + ver.to_bytes(2, "big")
    k0 = _hmac256(mk, base + b"\x00")[:KEY_BYTES]
    k1 = _hmac256(mk, base + b"\x01")[:KEY_BYTES]
    return BaliseKeyPair(k0=k0, k1=k1, id=balise_id, ver=ver)


def tag_sb(k0: bytes, user_bits: list[int], fmt: codec.TelegramFormat) -> int:
    """12-bit tag: leading bits of MAC(k0, format byte | packed user data)."""
    digest = _hmac256(k0, _FORMAT_BYTE[fmt.name] + bits_to_bytes(user_bits))
    return (digest[0] << 4) | (digest[1] >> 4)


def prf_s(k1: bytes, sb: int) -> int:
    """32-bit scrambling key: leading bits of PRF(k1, sb)."""
    msg = _PRF_PREFIX + (sb << 4).to_bytes(2, "big")
    return int.from_bytes(_hmac256(k1, msg)[:4], "big")


def generate_tag(
    user_bits: list[int],
    keys: BaliseKeyPair,
    fmt: codec.TelegramFormat = codec.LONG,
) -> tuple[int, int]:
    """Return (sb, S) binding the user data to the balise keys."""
    sb = tag_sb(keys.k0, user_bits, fmt)
    return sb, prf_s(keys.k1, sb)


def encode_authenticated(
    user_bits: list[int],
    keys: BaliseKeyPair,
    fmt: codec.TelegramFormat = codec.LONG,
    g: int = codec.GEN_POLY,
    table: codec.SubstitutionTable = codec.DEFAULT_TABLE,
) -> list[int]:
    """Encode a telegram whose sb field is the authentication tag."""
    sb, s = generate_tag(user_bits, keys, fmt)
    return codec.encode(user_bits, sb, s, fmt, g, table)


def verify_and_decode(
    stream: list[int],
    keys: BaliseKeyPair,
    fmt: codec.TelegramFormat = codec.LONG,
    g: int = codec.GEN_POLY,
    table: codec.SubstitutionTable = codec.DEFAULT_TABLE,
) -> list[int]:
    """Decode a stream and verify its tag; returns the user bits.

    Raises codec.NoTelegramFound when no window aligns and AuthFailure
    when the recomputed tag differs from the received sb.
    """
    result = codec.decode_stream(
        stream, fmt, s_from_sb=lambda sb: prf_s(keys.k1, sb), g=g, table=table
    )
    if tag_sb(keys.k0, result.user_bits, fmt) != result.sb:
        raise AuthFailure(f"tag mismatch for balise id {keys.id}")
    return result.user_bits


# ---------------------------------------------------------------------------
# Keystore
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Keystore:
    mk: bytes
    ver: int

    def keys_for(self, balise_id: int) -> BaliseKeyPair:
        return derive_keys(self.mk, balise_id, self.ver)


def new_keystore(seed: int | None = None, ver: int = 0) -> Keystore:
    """Fresh keystore; a seed makes mk reproducible for tests."""
    if seed is None:
        mk = secrets.token_bytes(32)
    else:
        mk = hashlib.sha256(b"balisim-keygen" + seed.to_bytes(8, "big")).digest()
    return Keystore(mk=mk, ver=ver)


def save_keystore(store: Keystore, path: str) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump({"mk_hex": store.mk.hex(), "ver": store.ver}, f)
        f.write("\n")


def load_keystore(path: str) -> Keystore:
    with open(path, encoding="utf-8") as f:
        raw = json.load(f)
    mk = bytes.fromhex(raw["mk_hex"])
    if len(mk) != 32:
        raise ValueError("mk_hex must encode 32 bytes")
    return Keystore(mk=mk, ver=int(raw["ver"]))
