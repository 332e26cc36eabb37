"""Exhaustive decoding strategies for ECB ciphertext compressed by truncation.

Strategy 1 encrypts candidate plaintexts in decreasing probability until one
compresses to the observed value. Strategy 2 decrypts every ciphertext that
compresses to the observed value until one lands in the plaintext support.
Both are run against the toy cipher so the searches finish at desk scale.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from .bits import BitBlock
from .cipher import TOY, CipherKey, ToyFeistel
from .sources import FiniteDistribution


@dataclass(frozen=True)
class TruncationCompressor:
    """Keeps the first ``t`` of ``m`` ciphertext bits."""

    t: int
    m: int

    def __post_init__(self):
        if not 1 <= self.t <= self.m:
            raise ValueError(f"need 1 <= t <= m, got t={self.t}, m={self.m}")

    def __call__(self, y: BitBlock) -> BitBlock:
        return truncate_compress(y, self.t)

    def preimages(self, c: BitBlock) -> Iterable[BitBlock]:
        """All ``2**(m-t)`` completions of ``c``, ascending."""
        shift = self.m - self.t
        base = c.value << shift
        return (BitBlock(base | low, self.m) for low in range(1 << shift))


def truncate_compress(y: BitBlock, t: int) -> BitBlock:
    if not 1 <= t <= y.m:
        raise ValueError(f"need 1 <= t <= {y.m}, got {t}")
    return BitBlock(y.value >> (y.m - t), t)


@dataclass(frozen=True)
class ExhaustiveRun:
    queries_made: int
    recovered: bool
    strategy: int
    plaintext: BitBlock | None = None


def exhaustive_strategy1(c: BitBlock, dist: FiniteDistribution,
                         enc_oracle: Callable[[BitBlock], BitBlock],
                         compressor: Callable[[BitBlock], BitBlock]) -> ExhaustiveRun:
    queries = 0
    for x in dist.by_probability():
        queries += 1
        if compressor(enc_oracle(x)) == c:
            return ExhaustiveRun(queries, True, 1, x)
    return ExhaustiveRun(queries, False, 1)


def exhaustive_strategy2(c: BitBlock, dec_oracle: Callable[[BitBlock], BitBlock],
                         compressor: TruncationCompressor,
                         membership_test: Callable[[BitBlock], bool]) -> ExhaustiveRun:
    queries = 0
    for y in compressor.preimages(c):
        queries += 1
        x = dec_oracle(y)
        if membership_test(x):
            return ExhaustiveRun(queries, True, 2, x)
    return ExhaustiveRun(queries, False, 2)


def birthday_bound(n: int, t: int) -> float:
    """Probability that some pair among ``n`` random t-bit values collides, 1 - exp(-n(n-1)/2^(t+1))."""
    return -math.expm1(-n * (n - 1) / 2.0 ** (t + 1))


def _toy(rng: np.random.Generator, m: int) -> ToyFeistel:
    return ToyFeistel(CipherKey(rng.bytes(8), TOY, m))


def collision_probability(n: int, t: int, trials: int, seed: int = 0, m: int = 24) -> float:
    """Fraction of random toy keys under which two of ``n`` fixed plaintexts share a t-bit ciphertext prefix."""
    rng = np.random.default_rng(seed)
    support = np.array([b.value for b in FiniteDistribution.random_uniform(n, m, rng).blocks],
                       dtype=np.uint64)
    hits = 0
    for _ in range(trials):
        prefixes = _toy(rng, m).forward_array(support) >> np.uint64(m - t)
        hits += np.unique(prefixes).size < n
    return hits / trials


@dataclass(frozen=True)
class TrialRecord:
    trial: int
    queries: int
    recovered: bool
    correct: bool


def lab_setup(n: int, m: int, seed: int = 0):
    """``(rng, support distribution, cipher)`` as used by the experiments for ``seed``."""
    rng = np.random.default_rng(seed)
    dist = FiniteDistribution.random_uniform(n, m, rng)
    return rng, dist, _toy(rng, m)


def strategy1_experiment(n: int, t: int, m: int, trials: int, seed: int = 0,
                         fresh_key_per_trial: bool = True) -> list[TrialRecord]:
    """Uniform support of ``n`` random blocks; each trial draws X, encrypts, truncates and decodes."""
    rng, dist, cipher = lab_setup(n, m, seed)
    comp = TruncationCompressor(t, m)
    out = []
    for k in range(trials):
        if fresh_key_per_trial and k:
            cipher = _toy(rng, m)
        x = dist.sample(rng)
        run = exhaustive_strategy1(comp(cipher.forward(x)), dist, cipher.forward, comp)
        out.append(TrialRecord(k, run.queries_made, run.recovered, run.plaintext == x))
    return out


def strategy2_experiment(n: int, t: int, m: int, trials: int, seed: int = 0) -> list[TrialRecord]:
    """Fixed key and support; each trial draws X and searches the preimages of its truncation."""
    rng, dist, cipher = lab_setup(n, m, seed)
    members = set(dist.blocks)
    comp = TruncationCompressor(t, m)
    out = []
    for k in range(trials):
        x = dist.sample(rng)
        run = exhaustive_strategy2(comp(cipher.forward(x)), cipher.inverse, comp, members.__contains__)
        out.append(TrialRecord(k, run.queries_made, run.recovered, run.plaintext == x))
    return out
