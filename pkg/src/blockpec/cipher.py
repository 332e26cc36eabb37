"""Keyed block permutations: AES-128 and a small-width Feistel toy cipher.

The toy cipher exists so that properties which need exhaustive enumeration
(bijectivity, exhaustive ECB decoding, ML decoding end to end) can be checked
at widths of 4..32 bits.

Toy cipher definition (bit-exact, fixed):

* the block is split into a left half of ``ceil(m/2)`` bits (the high bits)
  and a right half of ``floor(m/2)`` bits;
* the key (at most 8 bytes) is read as a big-endian integer ``k``;
* round key ``rk[r] = mix64(k + (r+1) * GOLDEN mod 2**64)`` and round
  constant ``rc[r] = (r+1) * 0xD1B54A32D192ED03 mod 2**64``;
* round function ``F_r(x) = mix64(x ^ rk[r] ^ rc[r])`` truncated to the width
  of the half it is xored into;
* 8 rounds; even rounds do ``L ^= F_r(R)``, odd rounds ``R ^= F_r(L)``.

``mix64`` is the splitmix64 finalizer. Every round is an involution on the
pair (L, R), so the network is a bijection for any key.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from cryptography.hazmat.primitives.ciphers import Cipher, algorithms, modes

from .bits import BitBlock

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
ROUND_CONST = 0xD1B54A32D192ED03
TOY_ROUNDS = 8
TOY_MIN_WIDTH, TOY_MAX_WIDTH = 4, 32

AES128 = "aes128"
TOY = "toy"


class CipherConfigError(ValueError):
    """Key, family or block width do not fit together."""


@dataclass(frozen=True)
class CipherKey:
    key: bytes
    family: str
    m: int

    def __post_init__(self):
        if self.family == AES128:
            if len(self.key) != 16 or self.m != 128:
                raise CipherConfigError("AES-128 needs a 16-byte key and m=128")
        elif self.family == TOY:
            if not 1 <= len(self.key) <= 8:
                raise CipherConfigError("toy cipher key must be 1..8 bytes")
            if not TOY_MIN_WIDTH <= self.m <= TOY_MAX_WIDTH:
                raise CipherConfigError(
                    f"toy cipher width must be in [{TOY_MIN_WIDTH}, {TOY_MAX_WIDTH}], got {self.m}")
        else:
            raise CipherConfigError(f"unknown cipher family {self.family!r}")

    def __repr__(self):
        # keep key material out of logs
        return f"CipherKey(family={self.family!r}, m={self.m})"


def generate_key(family: str = AES128, m: int = 128, rng=None) -> CipherKey:
    """Fresh key; ``rng`` is a numpy Generator for reproducible runs, else os.urandom."""
    nbytes = 16 if family == AES128 else 8
    raw = os.urandom(nbytes) if rng is None else rng.bytes(nbytes)
    return CipherKey(raw, family, m)


def save_key(key: CipherKey, path) -> None:
    prefix = "" if key.family == AES128 else f"toy{key.m}:"
    Path(path).write_text(prefix + key.key.hex() + "\n")


def load_key(path) -> CipherKey:
    """Read a hex key file. A bare 32-hex-digit line is AES-128; ``toy<m>:<hex>`` a toy key."""
    text = Path(path).read_text().strip()
    if ":" in text:
        tag, hexkey = text.split(":", 1)
        if not tag.startswith(TOY):
            raise CipherConfigError(f"unknown key tag {tag!r}")
        return CipherKey(bytes.fromhex(hexkey), TOY, int(tag[len(TOY):]))
    return CipherKey(bytes.fromhex(text), AES128, 128)


class BlockPermutation:
    """A keyed bijection on ``m``-bit blocks."""

    m: int

    def forward(self, block: BitBlock) -> BitBlock:
        self._check(block)
        return BitBlock(self.forward_int(block.value), self.m)

    def inverse(self, block: BitBlock) -> BitBlock:
        self._check(block)
        return BitBlock(self.inverse_int(block.value), self.m)

    def forward_int(self, x: int) -> int:
        raise NotImplementedError

    def inverse_int(self, y: int) -> int:
        raise NotImplementedError

    def _check(self, block: BitBlock):
        if block.m != self.m:
            raise CipherConfigError(f"block width {block.m} does not match cipher width {self.m}")


class AES128Cipher(BlockPermutation):
    m = 128

    def __init__(self, key: CipherKey):
        if key.family != AES128:
            raise CipherConfigError(f"expected an AES-128 key, got {key.family}")
        cipher = Cipher(algorithms.AES(key.key), modes.ECB())
        self._enc = cipher.encryptor()
        self._dec = cipher.decryptor()

    def forward_int(self, x: int) -> int:
        return int.from_bytes(self._enc.update(x.to_bytes(16, "big")), "big")

    def inverse_int(self, y: int) -> int:
        return int.from_bytes(self._dec.update(y.to_bytes(16, "big")), "big")


def _mix64(z: int) -> int:
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def _mix64_np(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


@dataclass
class ToyFeistel(BlockPermutation):
    key: CipherKey
    m: int = field(init=False)

    def __post_init__(self):
        if self.key.family != TOY:
            raise CipherConfigError(f"expected a toy key, got {self.key.family}")
        self.m = self.key.m
        self.right_bits = self.m // 2
        self.left_bits = self.m - self.right_bits
        k = int.from_bytes(self.key.key, "big")
        self._round_masks = [
            _mix64((k + (r + 1) * GOLDEN) & MASK64) ^ ((r + 1) * ROUND_CONST & MASK64)
            for r in range(TOY_ROUNDS)
        ]

    def _split(self, x):
        return x >> self.right_bits, x & ((1 << self.right_bits) - 1)

    def forward_int(self, x: int) -> int:
        lmask, rmask = (1 << self.left_bits) - 1, (1 << self.right_bits) - 1
        left, right = self._split(x)
        for r, km in enumerate(self._round_masks):
            if r % 2 == 0:
                left ^= _mix64(right ^ km) & lmask
            else:
                right ^= _mix64(left ^ km) & rmask
        return (left << self.right_bits) | right

    def inverse_int(self, y: int) -> int:
        lmask, rmask = (1 << self.left_bits) - 1, (1 << self.right_bits) - 1
        left, right = self._split(y)
        for r in reversed(range(TOY_ROUNDS)):
            km = self._round_masks[r]
            if r % 2 == 0:
                left ^= _mix64(right ^ km) & lmask
            else:
                right ^= _mix64(left ^ km) & rmask
        return (left << self.right_bits) | right

    def forward_array(self, x: np.ndarray) -> np.ndarray:
        """Vectorized ``forward_int`` over a uint64 array."""
        return self._apply_array(np.asarray(x, dtype=np.uint64), range(TOY_ROUNDS))

    def inverse_array(self, y: np.ndarray) -> np.ndarray:
        return self._apply_array(np.asarray(y, dtype=np.uint64), reversed(range(TOY_ROUNDS)))

    def _apply_array(self, x, rounds):
        rb = np.uint64(self.right_bits)
        lmask = np.uint64((1 << self.left_bits) - 1)
        rmask = np.uint64((1 << self.right_bits) - 1)
        left, right = x >> rb, x & rmask
        for r in rounds:
            km = np.uint64(self._round_masks[r])
            if r % 2 == 0:
                left = left ^ (_mix64_np(right ^ km) & lmask)
            else:
                right = right ^ (_mix64_np(left ^ km) & rmask)
        return (left << rb) | right


class IdentityPermutation(BlockPermutation):
    """B_K(x) = x. Only useful in tests where the chaining algebra should be visible."""

    def __init__(self, m: int):
        self.m = m

    def forward_int(self, x: int) -> int:
        return x

    def inverse_int(self, y: int) -> int:
        return y


def make_cipher(key: CipherKey) -> BlockPermutation:
    if key.family == AES128:
        return AES128Cipher(key)
    return ToyFeistel(key)


def aes128_forward(key: CipherKey, block: BitBlock) -> BitBlock:
    return AES128Cipher(key).forward(block)


def aes128_inverse(key: CipherKey, block: BitBlock) -> BitBlock:
    return AES128Cipher(key).inverse(block)


def toy_forward(key: CipherKey, block: BitBlock) -> BitBlock:
    return ToyFeistel(key).forward(block)


def toy_inverse(key: CipherKey, block: BitBlock) -> BitBlock:
    return ToyFeistel(key).inverse(block)
