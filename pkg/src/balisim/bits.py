"""Bit-vector helpers shared by the codec and the authentication layer.

Bits are handled as lists of 0/1 ints, most significant bit first.  The
leftmost list element is the highest-order bit; in telegram position
notation (b_{n-1} .. b_0, left to right) list index k corresponds to
position b_{n-1-k}.  Lengths such as 1023 are not byte multiples, so
telegrams are serialized as explicit '0'/'1' character strings.
"""

from __future__ import annotations


def int_to_bits(value: int, width: int) -> list[int]:
    """Big-endian bit expansion of a non-negative int, zero-padded to width."""
    if value < 0:
        raise ValueError("value must be non-negative")
    if value >> width:
        raise ValueError(f"value {value:#x} does not fit in {width} bits")
    return [(value >> (width - 1 - i)) & 1 for i in range(width)]


def bits_to_int(bits: list[int]) -> int:
    """Interpret a big-endian bit list as an unsigned int."""
    value = 0
    for b in bits:
        value = (value << 1) | (b & 1)
    return value


def bits_to_bytes(bits: list[int]) -> bytes:
    """Pack bits MSB-first, zero-padding the final byte on the right."""
    padded = bits + [0] * (-len(bits) % 8)
    return bytes(
        bits_to_int(padded[i : i + 8]) for i in range(0, len(padded), 8)
    )


def bytes_to_bits(data: bytes) -> list[int]:
    """Unpack bytes into bits, MSB-first."""
    out: list[int] = []
    for byte in data:
        out.extend((byte >> (7 - i)) & 1 for i in range(8))
    return out


def bits_to_str(bits: list[int]) -> str:
    return "".join("1" if b else "0" for b in bits)


def str_to_bits(text: str) -> list[int]:
    """Parse a '0'/'1' string; rejects any other character."""
    bits = []
    for ch in text:
        if ch == "0":
            bits.append(0)
        elif ch == "1":
            bits.append(1)
        else:
            raise ValueError(f"invalid bit character {ch!r}")
    return bits
