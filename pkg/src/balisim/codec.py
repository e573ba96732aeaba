"""Bit-exact telegram codec for balise spot transmission.

Telegram layout (left to right, positions b_{n-1} .. b_0):

    shaped_data | cb (3) | sb (12) | esb (10) | check (85)

with n = 1023 (long, 913 shaped / 830 user bits) or n = 341 (short,
231 shaped / 210 user bits).  Encoding scrambles the user bits with an
additive LFSR keystream seeded by S, substitutes 10-bit groups with
11-bit alphabet words, and appends the 85-bit polynomial remainder of
the prefix as check bits.  Decoding slides a window of n + r bits over
a repeated stream one bit at a time until the divisibility, extra-bit
coincidence and word-validity checks all pass, then verifies the
control bits, desubstitutes and descrambles.

Two standard-owned constants are not public and are replaced by fixed,
documented surrogates, both loadable from JSON files for conformance
with real telegrams: the 11-bit substitution alphabet (default: the
1024 numerically smallest 11-bit words with 4..7 ones, ascending) and
the degree-85 generator polynomial (default: GEN_POLY below, an
arbitrary fixed polynomial with constant term 1 chosen coprime to
x^1023 + 1 and x^341 + 1 so that misaligned windows cannot pass the
divisibility check structurally).
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .bits import bits_to_int, int_to_bits


class CodecError(Exception):
    """Base class for codec failures."""


class FormatError(CodecError, ValueError):
    """Input violates a field-width or value-range constraint."""


class NoTelegramFound(CodecError):
    """The stream was exhausted without any window passing all checks."""


class ControlBitError(CodecError):
    """A window passed the alignment checks but its control bits are wrong."""


class AlphabetError(CodecError):
    """An 11-bit word outside the substitution alphabet was encountered."""


# ---------------------------------------------------------------------------
# Formats and field constants
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TelegramFormat:
    name: str
    n: int           # total telegram length in bits
    shaped_bits: int # scrambled + substituted user region
    user_bits: int   # raw user payload
    r_init: int      # initial extra-bit window width for decoding

    @property
    def check_prefix_bits(self) -> int:
        return self.n - CHECK_WIDTH


LONG = TelegramFormat("long", 1023, 913, 830, 77)
SHORT = TelegramFormat("short", 341, 231, 210, 121)
FORMATS: dict[str, TelegramFormat] = {f.name: f for f in (LONG, SHORT)}

CB_WIDTH = 3
SB_WIDTH = 12
ESB_WIDTH = 10
CHECK_WIDTH = 85

# (b109, b108, b107): inversion bit 0, then the fixed 0, 1 pattern.
CB_BITS = (0, 0, 1)
# Fixed surrogate for the extra shaping bits; carries no information here.
ESB_BITS = (0, 1, 0, 1, 0, 1, 0, 1, 0, 1)

# Degree-85 generator polynomial, constant term 1 (see module docstring).
GEN_POLY = 0x238F4D950C4193589DFF83

# After this many one-bit shifts without alignment, widen r to n.
R_FALLBACK_SHIFTS = 7500

WORD_WIDTH = 11
GROUP_WIDTH = 10


# ---------------------------------------------------------------------------
# Substitution alphabet
# ---------------------------------------------------------------------------

class SubstitutionTable:
    """Bijection between 10-bit groups and 1024 valid 11-bit words."""

    __slots__ = ("words", "_index")

    def __init__(self, words: list[int]):
        if len(words) != 1 << GROUP_WIDTH:
            raise FormatError(f"substitution table needs 1024 words, got {len(words)}")
        for w in words:
            if not 0 <= w < (1 << WORD_WIDTH):
                raise FormatError(f"table word {w} is not an 11-bit value")
        if len(set(words)) != len(words):
            raise FormatError("substitution table words must be distinct")
        self.words = tuple(words)
        self._index = {w: i for i, w in enumerate(self.words)}

    def word(self, group: int) -> int:
        return self.words[group]

    def index(self, word: int) -> int:
        idx = self._index.get(word)
        if idx is None:
            raise AlphabetError(f"word {word:#05x} is not in the alphabet")
        return idx

    def __contains__(self, word: int) -> bool:
        return word in self._index

    @classmethod
    def from_file(cls, path: str) -> "SubstitutionTable":
        with open(path, encoding="utf-8") as f:
            return cls(json.load(f))


def _default_words() -> list[int]:
    words = [w for w in range(1 << WORD_WIDTH) if 4 <= bin(w).count("1") <= 7]
    return words[: 1 << GROUP_WIDTH]


DEFAULT_TABLE = SubstitutionTable(_default_words())


def load_gen_poly(path: str) -> int:
    """Load a generator polynomial from a JSON list of nonzero exponents."""
    with open(path, encoding="utf-8") as f:
        exponents = json.load(f)
    g = 0
    for e in exponents:
        g |= 1 << e
    if g.bit_length() - 1 != CHECK_WIDTH:
        raise FormatError(f"generator polynomial must have degree {CHECK_WIDTH}")
    if not g & 1:
        raise FormatError("generator polynomial must have constant term 1")
    return g


# ---------------------------------------------------------------------------
# Polynomial arithmetic over GF(2), bit i of an int = coefficient of x^i
# ---------------------------------------------------------------------------

def poly_mod(value: int, g: int) -> int:
    """Remainder of value modulo g over GF(2)."""
    gd = g.bit_length() - 1
    vd = value.bit_length() - 1
    while vd >= gd:
        value ^= g << (vd - gd)
        vd = value.bit_length() - 1
    return value


def compute_check_bits(prefix_bits: list[int], g: int = GEN_POLY) -> list[int]:
    """85 check bits: remainder of prefix * x^85 modulo g."""
    rem = poly_mod(bits_to_int(prefix_bits) << CHECK_WIDTH, g)
    return int_to_bits(rem, CHECK_WIDTH)


# ---------------------------------------------------------------------------
# Scrambling
# ---------------------------------------------------------------------------

_LFSR_MASK = 0xFFFFFFFF


def keystream(seed: int, nbits: int) -> list[int]:
    """Additive keystream from a 32-bit Fibonacci LFSR, taps 32, 22, 2, 1.

    Output bit = register MSB; feedback enters at the LSB.  A zero seed
    is replaced by 1 so the register never locks up.
    """
    state = seed & _LFSR_MASK
    if state == 0:
        state = 1
    out = []
    for _ in range(nbits):
        out.append((state >> 31) & 1)
        fb = ((state >> 31) ^ (state >> 21) ^ (state >> 1) ^ state) & 1
        state = ((state << 1) | fb) & _LFSR_MASK
    return out


def scramble(bits: list[int], s: int) -> list[int]:
    """XOR bits with the keystream seeded by S; self-inverse."""
    return [b ^ k for b, k in zip(bits, keystream(s, len(bits)))]


def legacy_s_from_sb(sb: int) -> int:
    """Public, non-cryptographic S derivation used by legacy telegrams."""
    s = ((sb << 20) ^ (sb << 8) ^ sb) ^ 0x5A5A5A5A
    return s if s else 1


# ---------------------------------------------------------------------------
# Substitution
# ---------------------------------------------------------------------------

def substitute(bits: list[int], table: SubstitutionTable = DEFAULT_TABLE) -> list[int]:
    """Map each 10-bit group to its 11-bit alphabet word, MSB-first."""
    if len(bits) % GROUP_WIDTH:
        raise FormatError("substitute input must be a multiple of 10 bits")
    out: list[int] = []
    for i in range(0, len(bits), GROUP_WIDTH):
        word = table.word(bits_to_int(bits[i : i + GROUP_WIDTH]))
        out.extend(int_to_bits(word, WORD_WIDTH))
    return out


def desubstitute(bits: list[int], table: SubstitutionTable = DEFAULT_TABLE) -> list[int]:
    """Inverse of substitute; raises AlphabetError on any invalid word."""
    if len(bits) % WORD_WIDTH:
        raise FormatError("desubstitute input must be a multiple of 11 bits")
    out: list[int] = []
    for i in range(0, len(bits), WORD_WIDTH):
        group = table.index(bits_to_int(bits[i : i + WORD_WIDTH]))
        out.extend(int_to_bits(group, GROUP_WIDTH))
    return out


# ---------------------------------------------------------------------------
# Encoding
# ---------------------------------------------------------------------------

def encode(
    user_bits: list[int],
    sb: int,
    s: int,
    fmt: TelegramFormat = LONG,
    g: int = GEN_POLY,
    table: SubstitutionTable = DEFAULT_TABLE,
) -> list[int]:
    """Assemble a complete n-bit telegram from user bits, sb and S."""
    if len(user_bits) != fmt.user_bits:
        raise FormatError(
            f"{fmt.name} format takes {fmt.user_bits} user bits, got {len(user_bits)}"
        )
    if not 0 <= sb < (1 << SB_WIDTH):
        raise FormatError("sb must be a 12-bit value")
    if not 0 <= s < (1 << 32):
        raise FormatError("S must be a 32-bit value")
    shaped = substitute(scramble(user_bits, s), table)
    prefix = shaped + list(CB_BITS) + int_to_bits(sb, SB_WIDTH) + list(ESB_BITS)
    return prefix + compute_check_bits(prefix, g)


def encode_legacy(
    user_bits: list[int],
    sb: int,
    fmt: TelegramFormat = LONG,
    g: int = GEN_POLY,
    table: SubstitutionTable = DEFAULT_TABLE,
) -> list[int]:
    """Encode with S derived from sb by the public legacy rule."""
    return encode(user_bits, sb, legacy_s_from_sb(sb), fmt, g, table)


# ---------------------------------------------------------------------------
# Decoding
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DecodeResult:
    user_bits: list[int]
    sb: int
    shift: int       # window offset at which alignment was found
    inverted: bool   # stream polarity was inverted


def _shaped_words_valid(window: list[int], fmt: TelegramFormat,
                        table: SubstitutionTable) -> bool:
    for i in range(0, fmt.shaped_bits, WORD_WIDTH):
        if bits_to_int(window[i : i + WORD_WIDTH]) not in table:
            return False
    return True


def window_checks(
    window: list[int],
    fmt: TelegramFormat,
    r: int,
    g: int = GEN_POLY,
    table: SubstitutionTable = DEFAULT_TABLE,
) -> bool:
    """The three alignment checks on one n+r-bit window, cheapest first.

    True iff the r extra bits coincide with the leading r bits, all
    shaped 11-bit words are alphabet members, and the leading n bits
    are divisible by g.
    """
    n = fmt.n
    if len(window) != n + r:
        raise FormatError(f"window must be {n + r} bits, got {len(window)}")
    if window[n:] != window[:r]:
        return False
    if not _shaped_words_valid(window, fmt, table):
        return False
    return poly_mod(bits_to_int(window[:n]), g) == 0


def _roll_remainder(rem: int, b_out: int, b_in: int, rot: int, g: int) -> int:
    # rem' = ((rem + b_out * x^{n-1}) * x + b_in) mod g, with rot = x^{n-1} mod g
    if b_out:
        rem ^= rot
    rem <<= 1
    if rem >> CHECK_WIDTH:
        rem ^= g
    return rem ^ b_in


def _extract(window: list[int], fmt: TelegramFormat, shift: int, inverted: bool,
             s_from_sb, table: SubstitutionTable) -> DecodeResult:
    base = fmt.shaped_bits
    cb = tuple(window[base : base + CB_WIDTH])
    if cb != CB_BITS:
        raise ControlBitError(f"control bits {cb} at shift {shift}")
    sb = bits_to_int(window[base + CB_WIDTH : base + CB_WIDTH + SB_WIDTH])
    scrambled = desubstitute(window[:base], table)
    user = scramble(scrambled, s_from_sb(sb))
    return DecodeResult(user_bits=user, sb=sb, shift=shift, inverted=inverted)


def decode_stream(
    stream: list[int],
    fmt: TelegramFormat = LONG,
    s_from_sb=legacy_s_from_sb,
    g: int = GEN_POLY,
    table: SubstitutionTable = DEFAULT_TABLE,
) -> DecodeResult:
    """Find and decode one telegram in a bit stream.

    The stream is scanned with a window of n + r bits advancing one bit
    per step; a window is accepted when the leading n bits are divisible
    by g, the trailing r bits repeat the leading r bits, and every
    shaped word is in the alphabet.  Both polarities are tried; only the
    polarity whose control bits validate is accepted.  After 7500
    fruitless shifts r is widened to n.  S is recovered from sb through
    s_from_sb, which is the legacy rule or a key-derivation hook.
    """
    n = fmt.n
    r = fmt.r_init
    L = len(stream)
    if L < n + r:
        raise NoTelegramFound(f"stream of {L} bits is shorter than one window")
    inverse = [1 - b for b in stream]
    rot = poly_mod(1 << (n - 1), g)
    rem = poly_mod(bits_to_int(stream[:n]), g)
    rem_inv = poly_mod(bits_to_int(inverse[:n]), g)
    j = 0
    shifts = 0
    while j + n + r <= L:
        hit = None
        if rem == 0 and stream[j + n : j + n + r] == stream[j : j + r]:
            if _shaped_words_valid(stream[j : j + n], fmt, table):
                hit = False
        if hit is None and rem_inv == 0 \
                and stream[j + n : j + n + r] == stream[j : j + r]:
            if _shaped_words_valid(inverse[j : j + n], fmt, table):
                hit = True
        if hit is not None:
            window = inverse[j : j + n] if hit else stream[j : j + n]
            return _extract(window, fmt, j, hit, s_from_sb, table)
        if j + n >= L:
            break
        b_out, b_in = stream[j], stream[j + n]
        rem = _roll_remainder(rem, b_out, b_in, rot, g)
        rem_inv = _roll_remainder(rem_inv, 1 - b_out, 1 - b_in, rot, g)
        j += 1
        shifts += 1
        if shifts == R_FALLBACK_SHIFTS:
            r = n
    raise NoTelegramFound(f"no aligned window in {shifts} shifts")
