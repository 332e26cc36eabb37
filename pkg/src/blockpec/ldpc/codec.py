"""Syndrome (coset) Slepian-Wolf codecs.

A codec compresses an ``m``-bit block ``y`` to its syndrome ``H y`` and
recovers ``y`` from the syndrome plus side information ``z`` that differs
from ``y`` as if sent through a BSC(p).
"""
from __future__ import annotations

import hashlib
import math
import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from pathlib import Path

import numpy as np

from .bp import bp_decode_arrays, channel_llr
from .matrix import MatrixError, ParityCheckMatrix

ML_MAX_VARS = 24


class CodecError(ValueError):
    pass


@dataclass
class DecodeResult:
    """Decoder output. On failure ``bits`` is the last hard decision."""

    bits: np.ndarray
    success: bool
    iterations: int = 0


class SyndromeCodec:
    """LDPC syndrome codec decoded by belief propagation."""

    def __init__(self, matrix: ParityCheckMatrix, max_iterations: int = 100,
                 backend: str | None = None, meta: dict | None = None):
        if not 0 < matrix.n_checks < matrix.n_vars:
            raise CodecError("rate must lie strictly between 0 and 1")
        if max_iterations < 1:
            raise CodecError("max_iterations must be >= 1")
        self.matrix = matrix
        self.max_iterations = max_iterations
        self.backend = backend
        self.meta = dict(meta or {})

    @property
    def m(self) -> int:
        return self.matrix.n_vars

    @property
    def n_checks(self) -> int:
        return self.matrix.n_checks

    @property
    def rate(self) -> Fraction:
        return Fraction(self.n_checks, self.m)

    @property
    def digest(self) -> bytes:
        return self.matrix.digest

    def encode(self, y) -> np.ndarray:
        try:
            return self.matrix.syndrome(y)
        except MatrixError as exc:
            raise CodecError(str(exc)) from None

    def _check_inputs(self, syndrome, side):
        syndrome = np.asarray(syndrome, dtype=np.uint8)
        side = np.asarray(side, dtype=np.uint8)
        if syndrome.shape != (self.n_checks,) or side.shape != (self.m,):
            raise CodecError("syndrome or side-information length does not match the codec")
        return syndrome, side

    def decode(self, syndrome, side, p: float) -> DecodeResult:
        syndrome, side = self._check_inputs(syndrome, side)
        bits, ok, its = bp_decode_arrays(self.matrix, syndrome, channel_llr(side, p),
                                         self.max_iterations, self.backend)
        if ok:
            assert np.array_equal(self.matrix.syndrome(bits), syndrome)
        return DecodeResult(bits, bool(ok), int(its))

    def descriptor(self) -> dict:
        return {"m": self.m, "n_checks": self.n_checks,
                "max_iterations": self.max_iterations,
                "digest": self.digest.hex(), **self.meta}

    def save(self, alist_path) -> None:
        """Write ``<name>.alist`` plus a ``<name>.json`` descriptor next to it."""
        alist_path = Path(alist_path)
        self.matrix.save_alist(alist_path)
        alist_path.with_suffix(".json").write_text(json.dumps(self.descriptor(), indent=2) + "\n")

    @classmethod
    def load(cls, alist_path, **kwargs) -> "SyndromeCodec":
        alist_path = Path(alist_path)
        matrix = ParityCheckMatrix.load_alist(alist_path)
        meta, max_it = {}, 100
        desc_path = alist_path.with_suffix(".json")
        if desc_path.exists():
            meta = json.loads(desc_path.read_text())
            if meta.get("digest") not in (None, matrix.digest.hex()):
                raise CodecError(f"descriptor digest does not match {alist_path}")
            max_it = meta.pop("max_iterations", 100)
            for k in ("m", "n_checks", "digest"):
                meta.pop(k, None)
        kwargs.setdefault("max_iterations", max_it)
        return cls(matrix, meta=meta, **kwargs)


class _CosetTable:
    """Every codeword and the smallest member of every coset of a small code."""

    def __init__(self, matrix: ParityCheckMatrix):
        m, r = matrix.n_vars, matrix.n_checks
        words = np.arange(1 << m, dtype=np.uint32)
        syn = np.zeros(words.size, dtype=np.uint32)
        for c, row in enumerate(matrix.rows):
            mask = np.uint32(sum(1 << (m - 1 - v) for v in row))
            syn |= ((np.bitwise_count(words & mask) & 1).astype(np.uint32) << np.uint32(r - 1 - c))
        self.codewords = words[syn == 0]
        self.leader = np.full(1 << r, -1, dtype=np.int64)
        present, first = np.unique(syn, return_index=True)
        self.leader[present] = words[first]


_TABLES: dict[bytes, _CosetTable] = {}


def _bits_to_int(bits) -> int:
    return int("".join(map(str, np.asarray(bits, dtype=np.uint8).tolist())) or "0", 2)


def _int_to_bits(x: int, m: int) -> np.ndarray:
    return np.array([(x >> (m - 1 - i)) & 1 for i in range(m)], dtype=np.uint8)


def ml_decode_bruteforce(matrix: ParityCheckMatrix, syndrome, side, p: float) -> np.ndarray:
    """Maximum-likelihood ``y`` with ``H y = s`` given BSC(p) observation ``side``.

    For ``p < 0.5`` likelihood is decreasing in Hamming distance, so this is
    the coset member nearest to ``side``; ties go to the smallest value in
    MSB-first order.
    """
    m = matrix.n_vars
    if m > ML_MAX_VARS:
        raise CodecError(f"brute-force ML limited to m <= {ML_MAX_VARS}, got {m}")
    if not 0.0 <= p < 0.5:
        raise ValueError(f"crossover must be in [0, 0.5), got {p}")
    table = _TABLES.get(matrix.digest)
    if table is None:
        table = _TABLES[matrix.digest] = _CosetTable(matrix)
    lead = table.leader[_bits_to_int(syndrome)]
    if lead < 0:
        raise CodecError("syndrome has no preimage (H is rank deficient)")
    coset = table.codewords ^ np.uint32(lead)
    dist = np.bitwise_count(coset ^ np.uint32(_bits_to_int(side)))
    best = coset[dist == dist.min()].min()
    return _int_to_bits(int(best), m)


class MLCodec(SyndromeCodec):
    """Same encoder; decoder is exhaustive maximum likelihood (m <= 24)."""

    def __init__(self, matrix: ParityCheckMatrix, **kwargs):
        if matrix.n_vars > ML_MAX_VARS:
            raise CodecError(f"ML codec limited to m <= {ML_MAX_VARS}")
        super().__init__(matrix, **kwargs)

    def decode(self, syndrome, side, p: float) -> DecodeResult:
        syndrome, side = self._check_inputs(syndrome, side)
        return DecodeResult(ml_decode_bruteforce(self.matrix, syndrome, side, p), True, 0)


class BlockDiagonalCodec:
    """``copies`` independent uses of ``inner`` seen as one codec over ``copies * m`` bits.

    The parity-check matrix is block diagonal, so decoding factorises and an
    ML inner decoder gives ML decoding of the whole.
    """

    def __init__(self, inner: SyndromeCodec, copies: int):
        if copies < 1:
            raise CodecError("copies must be >= 1")
        self.inner = inner
        self.copies = copies

    @property
    def m(self) -> int:
        return self.inner.m * self.copies

    @property
    def n_checks(self) -> int:
        return self.inner.n_checks * self.copies

    @property
    def rate(self) -> Fraction:
        return self.inner.rate

    @cached_property
    def matrix(self) -> ParityCheckMatrix:
        m, rows = self.inner.m, []
        for k in range(self.copies):
            rows.extend([v + k * m for v in r] for r in self.inner.matrix.rows)
        return ParityCheckMatrix(self.m, rows)

    @property
    def digest(self) -> bytes:
        return hashlib.sha256(b"blockdiag" + self.inner.digest +
                              self.copies.to_bytes(4, "little")).digest()

    def encode(self, y) -> np.ndarray:
        y = np.asarray(y, dtype=np.uint8)
        if y.shape != (self.m,):
            raise CodecError(f"expected {self.m} bits")
        return np.concatenate([self.inner.encode(part) for part in y.reshape(self.copies, -1)])

    def decode(self, syndrome, side, p: float) -> DecodeResult:
        syndrome = np.asarray(syndrome, dtype=np.uint8).reshape(self.copies, -1)
        side = np.asarray(side, dtype=np.uint8).reshape(self.copies, -1)
        parts = [self.inner.decode(s, z, p) for s, z in zip(syndrome, side)]
        return DecodeResult(np.concatenate([r.bits for r in parts]),
                            all(r.success for r in parts),
                            max(r.iterations for r in parts))


def build_codec(m: int, rate, dist_name: str = "r05", seed: int = 0, **kwargs) -> SyndromeCodec:
    """PEG codec with ``ceil(rate * m)`` checks from a named degree distribution."""
    from .degree import DISTRIBUTIONS
    from .peg import peg_construct

    n_checks = math.ceil(Fraction(rate).limit_denominator(1 << 20) * m)
    matrix = peg_construct(m, n_checks, DISTRIBUTIONS[dist_name], seed)
    return SyndromeCodec(matrix, meta={"distribution": dist_name, "seed": seed}, **kwargs)
