"""Fixed-width bit blocks.

Bits are ordered most-significant-bit first within each byte and bytes are in
natural order, so ``BitBlock(0b1000_0000, 8).to_bits()`` is ``[1, 0, ..., 0]``.
Internally a block is an ``int`` holding the bits in that order.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class BitBlock:
    value: int
    m: int

    def __post_init__(self):
        if self.m < 1:
            raise ValueError(f"block width must be >= 1, got {self.m}")
        if self.value < 0 or self.value >> self.m:
            raise ValueError(f"value does not fit in {self.m} bits")

    @classmethod
    def zeros(cls, m: int) -> "BitBlock":
        return cls(0, m)

    @classmethod
    def from_bits(cls, bits) -> "BitBlock":
        bits = np.asarray(bits, dtype=np.uint8)
        m = bits.size
        pad = (-m) % 8
        packed = np.packbits(np.concatenate([np.zeros(pad, np.uint8), bits]))
        return cls(int.from_bytes(packed.tobytes(), "big"), m)

    @classmethod
    def from_bytes(cls, data: bytes, m: int | None = None) -> "BitBlock":
        m = 8 * len(data) if m is None else m
        return cls(int.from_bytes(data, "big"), m)

    @classmethod
    def from_hex(cls, text: str, m: int | None = None) -> "BitBlock":
        return cls.from_bytes(bytes.fromhex(text), m)

    @property
    def nbytes(self) -> int:
        return (self.m + 7) // 8

    def to_bytes(self) -> bytes:
        return self.value.to_bytes(self.nbytes, "big")

    def to_bits(self) -> np.ndarray:
        """Return the block as a uint8 array of 0/1, MSB first."""
        bits = np.unpackbits(np.frombuffer(self.to_bytes(), dtype=np.uint8))
        return bits[bits.size - self.m:]

    def hex(self) -> str:
        return self.to_bytes().hex()

    def __xor__(self, other: "BitBlock") -> "BitBlock":
        if not isinstance(other, BitBlock):
            return NotImplemented
        if other.m != self.m:
            raise ValueError(f"width mismatch: {self.m} vs {other.m}")
        return BitBlock(self.value ^ other.value, self.m)

    def __len__(self):
        return self.m

    def __getitem__(self, i: int) -> int:
        if not -self.m <= i < self.m:
            raise IndexError(i)
        i %= self.m
        return (self.value >> (self.m - 1 - i)) & 1

    def __repr__(self):
        return f"BitBlock({self.hex()}, m={self.m})"


def pack_bits(bits: np.ndarray) -> bytes:
    """MSB-first bit packing, zero padded at the end to a byte boundary."""
    return np.packbits(np.asarray(bits, dtype=np.uint8)).tobytes()


def unpack_bits(data: bytes, nbits: int) -> np.ndarray:
    bits = np.unpackbits(np.frombuffer(data, dtype=np.uint8))
    if bits.size < nbits:
        raise ValueError(f"need {nbits} bits, got {bits.size}")
    return bits[:nbits]


def blocks_to_bits(blocks) -> np.ndarray:
    return np.concatenate([b.to_bits() for b in blocks])


def bits_to_blocks(bits: np.ndarray, m: int) -> list[BitBlock]:
    bits = np.asarray(bits, dtype=np.uint8)
    if bits.size % m:
        raise ValueError(f"{bits.size} bits is not a multiple of m={m}")
    return [BitBlock.from_bits(bits[i:i + m]) for i in range(0, bits.size, m)]
