"""Post-encryption compression of CBC, OFB and CFB ciphertexts.

Compressors see only ciphertext and a codec. Decoders additionally take the
key and the source bit probability ``p``, and undo compression and
encryption jointly.

Block indices in this module are 0-based: plaintext block ``X_1`` is index 0.
"""
from __future__ import annotations

import math
import struct
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from .bits import BitBlock, bits_to_blocks, blocks_to_bits, pack_bits, unpack_bits
from .cipher import BlockPermutation, make_cipher
from .modes import CBC, CFB, OFB, ChainedCiphertext, ofb_keystream

MAGIC = b"PEC1"
VERSION = 1
MODE_CODES = {CBC: 1, OFB: 2, CFB: 3}
MODE_NAMES = {v: k for k, v in MODE_CODES.items()}
HEADER = struct.Struct("<4sBBIQII32s")

# fallback(block_index) -> the raw ciphertext block the failed syndrome stood for, or None
Fallback = Callable[[int], Optional[BitBlock]]


class PecError(ValueError):
    pass


@dataclass
class CompressedStream:
    """Compressor output.

    * CBC: ``iv_syndrome`` = C(IV), ``syndromes`` = C(Y_1)..C(Y_{n-1}), ``raw_tail`` = Y_n
    * CFB: ``iv`` raw, ``syndromes`` = C(Y_1)..C(Y_n)
    * OFB: ``iv`` raw, ``syndromes`` = one syndrome of the concatenated Y^n
    """

    mode: str
    m: int
    n: int
    rate: Fraction
    codec_digest: bytes
    syndromes: list[np.ndarray]
    iv: BitBlock | None = None
    iv_syndrome: np.ndarray | None = None
    raw_tail: BitBlock | None = None

    @property
    def syndrome_bits(self) -> int:
        """Length of one syndrome in bits."""
        frame = self.n * self.m if self.mode == OFB else self.m
        r = self.rate * frame
        if r.denominator != 1:
            raise PecError(f"rate {self.rate} does not give whole syndromes for {frame} bits")
        return int(r)

    def payload_bits(self) -> np.ndarray:
        if self.mode == CBC:
            parts = [self.iv_syndrome, *self.syndromes, self.raw_tail.to_bits()]
        else:
            parts = [self.iv.to_bits(), *self.syndromes]
        return np.concatenate(parts).astype(np.uint8)

    def payload_bit_length(self) -> int:
        return int(self.payload_bits().size)

    def to_bytes(self) -> bytes:
        head = HEADER.pack(MAGIC, VERSION, MODE_CODES[self.mode], self.m, self.n,
                           self.rate.numerator, self.rate.denominator, self.codec_digest)
        return head + pack_bits(self.payload_bits())

    @classmethod
    def from_bytes(cls, data: bytes) -> "CompressedStream":
        if len(data) < HEADER.size:
            raise PecError("truncated header")
        magic, version, mode_code, m, n, num, den, digest = HEADER.unpack_from(data)
        if magic != MAGIC or version != VERSION:
            raise PecError("not a PEC1 version 1 stream")
        if mode_code not in MODE_NAMES:
            raise PecError(f"unknown mode code {mode_code}")
        cs = cls(MODE_NAMES[mode_code], m, n, Fraction(num, den), digest, [])
        r = cs.syndrome_bits
        if cs.mode == OFB:
            sizes = [m, r]
        elif cs.mode == CFB:
            sizes = [m] + [r] * n
        else:
            sizes = [r] * n + [m]
        total = sum(sizes)
        body = data[HEADER.size:]
        if len(body) != (total + 7) // 8:
            raise PecError(f"payload has {len(body)} bytes, expected {(total + 7) // 8}")
        bits = unpack_bits(body, total)
        chunks = np.split(bits, np.cumsum(sizes)[:-1])
        if cs.mode == CBC:
            cs.iv_syndrome, cs.syndromes, cs.raw_tail = chunks[0], chunks[1:-1], BitBlock.from_bits(chunks[-1])
        else:
            cs.iv, cs.syndromes = BitBlock.from_bits(chunks[0]), chunks[1:]
        return cs


@dataclass
class PecResult:
    """Decoder output; unrecovered plaintext blocks are ``None``."""

    plaintext: list[BitBlock | None]
    status: list[bool]
    failed_block_index: int | None = None
    iterations: list[int] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.failed_block_index is None


def _check_codec(ct: ChainedCiphertext, codec, mode: str, frame_bits: int):
    if ct.mode != mode:
        raise PecError(f"expected a {mode.upper()} ciphertext, got {ct.mode.upper()}")
    if codec.m != frame_bits:
        raise PecError(f"codec width {codec.m} does not match {frame_bits}-bit frames")


def _check_stream(cs: CompressedStream, codec, mode: str):
    if cs.mode != mode:
        raise PecError(f"expected a {mode.upper()} stream, got {cs.mode.upper()}")
    if cs.codec_digest != codec.digest:
        raise PecError("stream was compressed with a different codec")


def _cipher(key) -> BlockPermutation:
    return key if isinstance(key, BlockPermutation) else make_cipher(key)


def compress_cbc(ct: ChainedCiphertext, codec) -> CompressedStream:
    """(C(IV), C(Y_1), ..., C(Y_{n-1}), Y_n)."""
    _check_codec(ct, codec, CBC, ct.m)
    return CompressedStream(
        CBC, ct.m, ct.n, codec.rate, codec.digest,
        syndromes=[codec.encode(y.to_bits()) for y in ct.blocks[:-1]],
        iv_syndrome=codec.encode(ct.iv.to_bits()),
        raw_tail=ct.blocks[-1],
    )


def decode_cbc(cs: CompressedStream, key, codec, p: float,
               fallback: Fallback | None = None) -> PecResult:
    """Right-to-left joint decompression and decryption.

    Block ``i`` is recovered from the syndrome of ``Y_{i-1}`` with side
    information ``B_K^{-1}(Y_i) = X_i xor Y_{i-1}``. If that decode fails and
    ``fallback`` does not supply ``Y_{i-1}``, blocks ``0..i`` are lost.
    """
    _check_stream(cs, codec, CBC)
    cipher = _cipher(key)
    n = cs.n
    plain: list[BitBlock | None] = [None] * n
    status = [False] * n
    iters = [0] * n
    # coded[i] is the syndrome of the ciphertext block preceding block i (Y_0 = IV)
    coded = [cs.iv_syndrome, *cs.syndromes]
    x_tilde = cipher.inverse(cs.raw_tail)
    for i in range(n - 1, -1, -1):
        res = codec.decode(coded[i], x_tilde.to_bits(), p)
        iters[i] = res.iterations
        if res.success:
            y_prev = BitBlock.from_bits(res.bits)
        else:
            y_prev = fallback(i) if fallback else None
            if y_prev is None:
                return PecResult(plain, status, i, iters)
        plain[i] = y_prev ^ x_tilde
        status[i] = True
        if i:
            x_tilde = cipher.inverse(y_prev)
    return PecResult(plain, status, None, iters)


def compress_ofb(ct: ChainedCiphertext, codec_nm) -> CompressedStream:
    """(IV, C(Y_1 || ... || Y_n)) with one codec over ``n*m`` bits."""
    _check_codec(ct, codec_nm, OFB, ct.n * ct.m)
    return CompressedStream(OFB, ct.m, ct.n, codec_nm.rate, codec_nm.digest,
                            syndromes=[codec_nm.encode(blocks_to_bits(ct.blocks))],
                            iv=ct.iv)


def decode_ofb(cs: CompressedStream, key, codec_nm, p: float,
               fallback: Fallback | None = None) -> PecResult:
    """Regenerate the keystream from the IV and use it as side information for Y^n.

    The whole stream is one frame: a decode failure loses every block unless
    ``fallback(0)`` returns the concatenated ciphertext as one wide block.
    """
    _check_stream(cs, codec_nm, OFB)
    stream = ofb_keystream(_cipher(key), cs.iv, cs.n)
    side = blocks_to_bits(stream)
    res = codec_nm.decode(cs.syndromes[0], side, p)
    if res.success:
        y_bits = res.bits
    else:
        wide = fallback(0) if fallback else None
        if wide is None:
            return PecResult([None] * cs.n, [False] * cs.n, 0, [res.iterations] * cs.n)
        y_bits = wide.to_bits()
    ys = bits_to_blocks(y_bits, cs.m)
    return PecResult([y ^ k for y, k in zip(ys, stream)], [True] * cs.n, None,
                     [res.iterations] * cs.n)


def compress_cfb(ct: ChainedCiphertext, codec) -> CompressedStream:
    """(IV, C(Y_1), ..., C(Y_n))."""
    _check_codec(ct, codec, CFB, ct.m)
    return CompressedStream(CFB, ct.m, ct.n, codec.rate, codec.digest,
                            syndromes=[codec.encode(y.to_bits()) for y in ct.blocks],
                            iv=ct.iv)


def decode_cfb(cs: CompressedStream, key, codec, p: float,
               fallback: Fallback | None = None) -> PecResult:
    """Left-to-right: K_1 = B_K(IV), Y_i decoded against K_i, K_{i+1} = B_K(Y_i).

    A failure at block ``i`` without fallback loses blocks ``i..n-1``.
    """
    _check_stream(cs, codec, CFB)
    cipher = _cipher(key)
    n = cs.n
    plain: list[BitBlock | None] = [None] * n
    status = [False] * n
    iters = [0] * n
    k = cipher.forward(cs.iv)
    for i in range(n):
        res = codec.decode(cs.syndromes[i], k.to_bits(), p)
        iters[i] = res.iterations
        if res.success:
            y = BitBlock.from_bits(res.bits)
        else:
            y = fallback(i) if fallback else None
            if y is None:
                return PecResult(plain, status, i, iters)
        plain[i] = y ^ k
        status[i] = True
        k = cipher.forward(y)
    return PecResult(plain, status, None, iters)


COMPRESS = {CBC: compress_cbc, OFB: compress_ofb, CFB: compress_cfb}
DECODE = {CBC: decode_cbc, OFB: decode_ofb, CFB: decode_cfb}


def compress(ct: ChainedCiphertext, codec) -> CompressedStream:
    if ct.mode not in COMPRESS:
        raise PecError(f"no keyless compressor for {ct.mode.upper()}")
    return COMPRESS[ct.mode](ct, codec)


def decode(cs: CompressedStream, key, codec, p: float, fallback: Fallback | None = None) -> PecResult:
    return DECODE[cs.mode](cs, key, codec, p, fallback)


def expected_payload_bits(mode: str, n: int, m: int, rate) -> int:
    """CBC: n*m*R + m; CFB: m + n*m*R; OFB: m + n*m*R (one syndrome over n*m bits)."""
    bits = Fraction(rate) * n * m + m
    if bits.denominator != 1:
        raise PecError("rate does not give a whole number of bits")
    return int(bits)


def required_rate(p: float, m: int | None = None) -> float:
    """Smallest usable compression rate for an i.i.d. Bernoulli(p) source: H_b(p)."""
    from .sources import binary_entropy
    return binary_entropy(p)


def compression_factor(n: float, m: int, rate: float, alphabet_bits: float = 1.0) -> float:
    """(n+1) m log|X| / (n m R + m log|X|); ``n = math.inf`` gives the limit log|X| / R."""
    if math.isinf(n):
        return alphabet_bits / rate
    return (n + 1) * m * alphabet_bits / (n * m * rate + m * alphabet_bits)
