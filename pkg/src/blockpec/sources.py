"""Plaintext sources and entropy functionals.

Randomness comes from numpy's PCG64 (``numpy.random.default_rng``), which is
seedable and gives identical streams across platforms.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .bits import BitBlock, bits_to_blocks


@dataclass
class BernoulliSource:
    """i.i.d. bits with ``Pr(X = 1) = p``. Use ``1 - p`` and complement for ``p > 0.5``."""

    p: float
    seed: int | None = None
    rng: np.random.Generator = field(init=False, repr=False)

    def __post_init__(self):
        if not 0.0 <= self.p <= 0.5:
            raise ValueError(f"p must be in [0, 0.5], got {self.p}")
        self.rng = np.random.default_rng(self.seed)

    def bits(self, count: int) -> np.ndarray:
        return (self.rng.random(count) < self.p).astype(np.uint8)


def sample_blocks(src: BernoulliSource, n: int, m: int) -> list[BitBlock]:
    return bits_to_blocks(src.bits(n * m), m)


def binary_entropy(p: float) -> float:
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must be a probability, got {p}")
    if p in (0.0, 1.0):
        return 0.0
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)


@dataclass(frozen=True)
class FiniteDistribution:
    support: tuple[tuple[BitBlock, float], ...]

    def __post_init__(self):
        object.__setattr__(self, "support", tuple(self.support))
        if not self.support:
            raise ValueError("empty support")
        if abs(sum(p for _, p in self.support) - 1.0) > 1e-9:
            raise ValueError("probabilities must sum to 1")
        if any(p < 0 for _, p in self.support):
            raise ValueError("negative probability")
        blocks = [b for b, _ in self.support]
        if len(set(blocks)) != len(blocks):
            raise ValueError("support entries must be distinct")
        if len({b.m for b in blocks}) != 1:
            raise ValueError("support blocks must share one width")

    @property
    def m(self) -> int:
        return self.support[0][0].m

    @property
    def blocks(self) -> list[BitBlock]:
        return [b for b, _ in self.support]

    @property
    def probs(self) -> np.ndarray:
        return np.array([p for _, p in self.support])

    def by_probability(self) -> list[BitBlock]:
        """Support in descending probability; equal probabilities keep file order."""
        order = sorted(range(len(self.support)), key=lambda i: -self.support[i][1])
        return [self.support[i][0] for i in order]

    def sample(self, rng: np.random.Generator, size: int | None = None):
        idx = rng.choice(len(self.support), size=size, p=self.probs)
        if size is None:
            return self.support[int(idx)][0]
        return [self.support[int(i)][0] for i in idx]

    @classmethod
    def uniform(cls, blocks) -> "FiniteDistribution":
        blocks = list(blocks)
        return cls(tuple((b, 1.0 / len(blocks)) for b in blocks))

    @classmethod
    def random_uniform(cls, n: int, m: int, rng: np.random.Generator) -> "FiniteDistribution":
        """Uniform over ``n`` distinct random ``m``-bit values."""
        if n > 1 << m:
            raise ValueError(f"cannot draw {n} distinct {m}-bit values")
        values = {}
        while len(values) < n:
            v = int.from_bytes(rng.bytes((m + 7) // 8), "big") >> ((-m) % 8)
            values.setdefault(v, None)
        return cls.uniform(BitBlock(v, m) for v in values)

    @classmethod
    def load(cls, path, m: int | None = None) -> "FiniteDistribution":
        """Text file with one ``<hex block> <probability>`` pair per line; ``#`` comments."""
        support = []
        for line in Path(path).read_text().splitlines():
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            hexval, prob = line.split()
            support.append((BitBlock.from_hex(hexval, m), float(prob)))
        return cls(tuple(support))

    def save(self, path) -> None:
        Path(path).write_text("".join(f"{b.hex()} {p!r}\n" for b, p in self.support))


def guessing_entropy(dist: FiniteDistribution) -> float:
    """Expected guesses when guessing in descending probability: sum_i i * p_(i)."""
    probs = np.sort(dist.probs)[::-1]
    return float(np.dot(np.arange(1, probs.size + 1), probs))
