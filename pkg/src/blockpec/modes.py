"""ECB, CBC, OFB and CFB over whole blocks (no padding)."""
from __future__ import annotations

import secrets
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .bits import BitBlock
from .cipher import BlockPermutation, CipherKey, make_cipher

ECB, CBC, OFB, CFB = "ecb", "cbc", "ofb", "cfb"
MODES = (ECB, CBC, OFB, CFB)


class ModeError(ValueError):
    pass


@dataclass(frozen=True)
class ChainedCiphertext:
    mode: str
    iv: BitBlock | None
    blocks: tuple[BitBlock, ...]

    def __post_init__(self):
        if self.mode not in MODES:
            raise ModeError(f"unknown mode {self.mode!r}")
        if (self.mode == ECB) != (self.iv is None):
            raise ModeError("ECB carries no IV; every other mode carries exactly one")
        object.__setattr__(self, "blocks", tuple(self.blocks))

    @property
    def m(self) -> int:
        return self.blocks[0].m

    @property
    def n(self) -> int:
        return len(self.blocks)

    def to_bytes(self) -> bytes:
        head = b"" if self.iv is None else self.iv.to_bytes()
        return head + b"".join(b.to_bytes() for b in self.blocks)

    @classmethod
    def from_bytes(cls, data: bytes, mode: str, m: int) -> "ChainedCiphertext":
        if m % 8:
            raise ModeError("file I/O needs a whole number of bytes per block")
        w = m // 8
        if len(data) % w:
            raise ModeError(f"{len(data)} bytes is not a whole number of {m}-bit blocks")
        chunks = [BitBlock.from_bytes(data[i:i + w]) for i in range(0, len(data), w)]
        if mode == ECB:
            return cls(mode, None, tuple(chunks))
        if len(chunks) < 2:
            raise ModeError("need an IV and at least one block")
        return cls(mode, chunks[0], tuple(chunks[1:]))


def _cipher(key) -> BlockPermutation:
    return key if isinstance(key, BlockPermutation) else make_cipher(key)


def _check_plaintext(cipher: BlockPermutation, blocks: Sequence[BitBlock]):
    if not blocks:
        raise ModeError("plaintext must contain at least one block")
    for b in blocks:
        if b.m != cipher.m:
            raise ModeError(f"block width {b.m} does not match cipher width {cipher.m}")


def _fresh_iv(m: int, iv: BitBlock | None, rng) -> BitBlock:
    if iv is not None:
        if iv.m != m:
            raise ModeError("IV width does not match the cipher")
        return iv
    if rng is None:
        return BitBlock(secrets.randbits(m), m)
    if m % 8 == 0:
        return BitBlock.from_bytes(rng.bytes(m // 8))
    return BitBlock(int(rng.integers(0, 1 << m)), m)


def _expect(ct: ChainedCiphertext, mode: str):
    if ct.mode != mode:
        raise ModeError(f"expected a {mode.upper()} ciphertext, got {ct.mode.upper()}")


def ecb_encrypt(key: CipherKey | BlockPermutation, plaintext: Sequence[BitBlock]) -> ChainedCiphertext:
    cipher = _cipher(key)
    _check_plaintext(cipher, plaintext)
    return ChainedCiphertext(ECB, None, tuple(cipher.forward(x) for x in plaintext))


def ecb_decrypt(key, ct: ChainedCiphertext) -> list[BitBlock]:
    _expect(ct, ECB)
    cipher = _cipher(key)
    return [cipher.inverse(y) for y in ct.blocks]


def cbc_encrypt(key, plaintext: Sequence[BitBlock], iv: BitBlock | None = None, rng=None) -> ChainedCiphertext:
    """Y_i = B_K(X_i xor Y_{i-1}) with Y_0 = IV."""
    cipher = _cipher(key)
    _check_plaintext(cipher, plaintext)
    iv = _fresh_iv(cipher.m, iv, rng)
    prev, out = iv, []
    for x in plaintext:
        prev = cipher.forward(x ^ prev)
        out.append(prev)
    return ChainedCiphertext(CBC, iv, tuple(out))


def cbc_decrypt(key, ct: ChainedCiphertext) -> list[BitBlock]:
    _expect(ct, CBC)
    cipher = _cipher(key)
    prevs = (ct.iv,) + ct.blocks[:-1]
    return [cipher.inverse(y) ^ prev for y, prev in zip(ct.blocks, prevs)]


def ofb_keystream(key, iv: BitBlock, n: int) -> list[BitBlock]:
    """K_1 = B_K(IV), K_i = B_K(K_{i-1})."""
    cipher = _cipher(key)
    out, k = [], iv
    for _ in range(n):
        k = cipher.forward(k)
        out.append(k)
    return out


def ofb_encrypt(key, plaintext: Sequence[BitBlock], iv: BitBlock | None = None, rng=None) -> ChainedCiphertext:
    cipher = _cipher(key)
    _check_plaintext(cipher, plaintext)
    iv = _fresh_iv(cipher.m, iv, rng)
    stream = ofb_keystream(cipher, iv, len(plaintext))
    return ChainedCiphertext(OFB, iv, tuple(x ^ k for x, k in zip(plaintext, stream)))


def ofb_decrypt(key, ct: ChainedCiphertext) -> list[BitBlock]:
    _expect(ct, OFB)
    stream = ofb_keystream(key, ct.iv, ct.n)
    return [y ^ k for y, k in zip(ct.blocks, stream)]


def cfb_encrypt(key, plaintext: Sequence[BitBlock], iv: BitBlock | None = None, rng=None) -> ChainedCiphertext:
    """K_i = B_K(Y_{i-1}) with Y_0 = IV; Y_i = X_i xor K_i."""
    cipher = _cipher(key)
    _check_plaintext(cipher, plaintext)
    iv = _fresh_iv(cipher.m, iv, rng)
    prev, out = iv, []
    for x in plaintext:
        prev = x ^ cipher.forward(prev)
        out.append(prev)
    return ChainedCiphertext(CFB, iv, tuple(out))


def cfb_decrypt(key, ct: ChainedCiphertext) -> list[BitBlock]:
    _expect(ct, CFB)
    cipher = _cipher(key)
    prevs = (ct.iv,) + ct.blocks[:-1]
    return [y ^ cipher.forward(prev) for y, prev in zip(ct.blocks, prevs)]


ENCRYPT = {ECB: lambda k, x, iv=None, rng=None: ecb_encrypt(k, x),
           CBC: cbc_encrypt, OFB: ofb_encrypt, CFB: cfb_encrypt}
DECRYPT = {ECB: ecb_decrypt, CBC: cbc_decrypt, OFB: ofb_decrypt, CFB: cfb_decrypt}


def encrypt(mode: str, key, plaintext, iv=None, rng=None) -> ChainedCiphertext:
    return ENCRYPT[mode](key, plaintext, iv=iv, rng=rng)


def decrypt(key, ct: ChainedCiphertext) -> list[BitBlock]:
    return DECRYPT[ct.mode](key, ct)


def read_plaintext(path, m: int) -> list[BitBlock]:
    data = Path(path).read_bytes()
    w = m // 8
    if m % 8 or not data or len(data) % w:
        raise ModeError(f"plaintext file must hold a whole, nonzero number of {m}-bit blocks")
    return [BitBlock.from_bytes(data[i:i + w]) for i in range(0, len(data), w)]


def write_blocks(path, blocks: Sequence[BitBlock]) -> None:
    Path(path).write_bytes(b"".join(b.to_bytes() for b in blocks))
