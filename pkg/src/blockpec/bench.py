"""Monte-Carlo frame error rates and the maximum-p search behind the rate tables."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.stats import beta

from .bits import BitBlock
from .cipher import AES128, TOY, CipherKey, make_cipher
from .ldpc.codec import build_codec
from .modes import cbc_encrypt
from .pipeline import compress_cbc, decode_cbc
from .sources import binary_entropy

log = logging.getLogger(__name__)

CHUNK = 500
CONFIDENCE = 0.95
GRID = 0.001

# (m, rate, target FER, p) as published, with the entropy column
PAPER_TABLE = [
    (128, Fraction(1, 2), 1e-3, 0.026, 0.1739),
    (128, Fraction(1, 2), 1e-4, 0.018, 0.1301),
    (128, Fraction(3, 4), 1e-3, 0.068, 0.3584),
    (128, Fraction(3, 4), 1e-4, 0.054, 0.3032),
    (1024, Fraction(1, 2), 1e-3, 0.058, 0.3195),
    (1024, Fraction(1, 2), 1e-4, 0.048, 0.2778),
    (1024, Fraction(3, 4), 1e-3, 0.134, 0.5710),
    (1024, Fraction(3, 4), 1e-4, 0.126, 0.5464),
]
DIST_FOR_RATE = {Fraction(1, 2): "r05", Fraction(3, 4): "r075"}


def clopper_pearson_upper(failures: int, trials: int, confidence: float = CONFIDENCE) -> float:
    """One-sided exact upper confidence bound on a binomial proportion."""
    if trials <= 0:
        raise ValueError("trials must be positive")
    if failures >= trials:
        return 1.0
    return float(beta.ppf(confidence, failures + 1, trials - failures))


def max_allowed_failures(trials: int, target: float, confidence: float = CONFIDENCE) -> int:
    """Largest failure count whose upper bound stays <= target (-1 if none)."""
    f = -1
    while f + 1 <= trials and clopper_pearson_upper(f + 1, trials, confidence) <= target:
        f += 1
    return f


@dataclass(frozen=True)
class FerEstimate:
    failures: int
    trials: int
    stopped_early: bool = False

    @property
    def fer(self) -> float:
        return self.failures / self.trials

    @property
    def upper(self) -> float:
        return clopper_pearson_upper(self.failures, self.trials)

    @property
    def sigma(self) -> float:
        q = self.fer
        return math.sqrt(max(q * (1 - q), 1.0 / self.trials) / self.trials)


@dataclass(frozen=True)
class BenchConfig:
    m: int
    rate: Fraction
    target_fer: float
    trials: int
    seed: int = 0
    p: float | None = None
    mode: str = "codec"

    def __post_init__(self):
        if not 0.0 < self.target_fer <= 1.0:
            raise ValueError("target FER must be in (0, 1]")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.trials < 100 / self.target_fer:
            log.warning("trials=%d is below 100/target; the upper bound will be loose", self.trials)


def _chunk_rng(seed: int, chunk: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, chunk]))


def _codec_chunk(codec, p: float, seed: int, chunk: int, size: int) -> int:
    rng = _chunk_rng(seed, chunk)
    ys = rng.integers(0, 2, size=(size, codec.m), dtype=np.uint8)
    # uniform draws compared against p: frames are coupled across p at a fixed seed
    noise = (rng.random((size, codec.m)) < p).astype(np.uint8)
    failures = 0
    for y, e in zip(ys, noise):
        res = codec.decode(codec.encode(y), y ^ e, p)
        failures += (not res.success) or not np.array_equal(res.bits, y)
    return failures


def _pipeline_chunk(codec, p: float, seed: int, chunk: int, size: int) -> int:
    """Per-block failures of the CBC scheme on one-block streams, fresh key each chunk."""
    rng = _chunk_rng(seed, chunk)
    m = codec.m
    key = CipherKey(rng.bytes(16), AES128, 128) if m == 128 else CipherKey(rng.bytes(8), TOY, m)
    cipher = make_cipher(key)
    failures = 0
    for _ in range(size):
        x = BitBlock.from_bits((rng.random(m) < p).astype(np.uint8))
        iv = BitBlock.from_bits(rng.integers(0, 2, m, dtype=np.uint8))
        ct = cbc_encrypt(cipher, [x], iv=iv)
        res = decode_cbc(compress_cbc(ct, codec), cipher, codec, p)
        failures += (not res.ok) or res.plaintext[0] != x
    return failures


def fer_estimate(codec, p: float, trials: int, seed: int = 0, *, level: str = "codec",
                 stop_after: int | None = None, workers: int = 1) -> FerEstimate:
    """Frame error rate of ``codec`` over BSC(p) with uniform frames.

    Trials run in fixed chunks of ``CHUNK`` frames seeded by ``(seed, chunk
    index)``, so the result does not depend on ``workers``. With
    ``stop_after`` the run ends after the first chunk that pushes the failure
    count above it.
    """
    if trials <= 0:
        raise ValueError("trials must be positive")
    if not 0.0 <= p < 0.5:
        raise ValueError(f"p must be in [0, 0.5), got {p}")
    work = _codec_chunk if level == "codec" else _pipeline_chunk
    sizes = [min(CHUNK, trials - s) for s in range(0, trials, CHUNK)]
    jobs = [(codec, p, seed, k, size) for k, size in enumerate(sizes)]
    failures = done = 0
    if workers > 1:
        from multiprocessing import get_context
        pool = get_context("fork").Pool(workers)
        results = pool.imap(_star(work), jobs)
    else:
        pool, results = None, (work(*job) for job in jobs)
    try:
        for (_, _, _, _, size), f in zip(jobs, results):
            failures += f
            done += size
            if stop_after is not None and failures > stop_after:
                return FerEstimate(failures, done, stopped_early=done < trials)
    finally:
        if pool is not None:
            pool.terminate()
    return FerEstimate(failures, done)


class _star:
    def __init__(self, fn):
        self.fn = fn

    def __call__(self, args):
        return self.fn(*args)


def max_p_search(codec, target_fer: float, trials: int, seed: int = 0, *,
                 resolution: float = GRID, workers: int = 1, level: str = "codec") -> float:
    """Largest grid ``p`` whose FER upper bound meets ``target_fer``, by bisection on [0, 0.5].

    Returns 0 when even the first grid point fails and 0.5 when the target
    is 1 (every p qualifies).
    """
    if target_fer >= 1.0:
        return 0.5
    allowed = max_allowed_failures(trials, target_fer)
    if allowed < 0:
        raise ValueError(f"{trials} trials cannot certify FER <= {target_fer}")
    lo, hi = 0, int(round(0.5 / resolution))

    def passes(k):
        est = fer_estimate(codec, k * resolution, trials, seed, level=level,
                           stop_after=allowed, workers=workers)
        log.info("p=%.4f failures=%d/%d", k * resolution, est.failures, est.trials)
        return est.failures <= allowed

    while hi - lo > 1:
        mid = (lo + hi) // 2
        if passes(mid):
            lo = mid
        else:
            hi = mid
    return round(lo * resolution, 10)


@lru_cache(maxsize=None)
def table_codec(m: int, rate: Fraction, seed: int = 0):
    return build_codec(m, rate, DIST_FOR_RATE[rate], seed)


@dataclass(frozen=True)
class TableRow:
    m: int
    rate: Fraction
    target_fer: float
    paper_p: float
    paper_entropy: float
    measured_p: float | None

    @property
    def measured_entropy(self) -> float | None:
        return None if self.measured_p is None else binary_entropy(self.measured_p)


def reproduce_tables(trials: int = 20_000, seed: int = 0, long: bool = False,
                     workers: int = 1, code_seed: int = 0, rows=None) -> list[TableRow]:
    """Measure p* for every table row; 1e-4 rows are skipped unless ``long``."""
    out = []
    for m, rate, target, p_paper, h_paper in (rows or PAPER_TABLE):
        measured = None
        if long or target >= 1e-3:
            n_trials = trials if target >= 1e-3 else max(trials, 200_000)
            measured = max_p_search(table_codec(m, rate, code_seed), target, n_trials,
                                    seed, workers=workers)
        out.append(TableRow(m, rate, target, p_paper, h_paper, measured))
    return out


def format_table(rows, fmt: str = "markdown") -> str:
    head = ["m", "rate", "target_fer", "paper_p", "paper_entropy", "measured_p", "measured_entropy"]
    body = []
    for r in rows:
        mp = "-" if r.measured_p is None else f"{r.measured_p:.3f}"
        mh = "-" if r.measured_entropy is None else f"{r.measured_entropy:.4f}"
        body.append([str(r.m), f"{float(r.rate):.2f}", f"{r.target_fer:.0e}",
                     f"{r.paper_p:.3f}", f"{r.paper_entropy:.4f}", mp, mh])
    if fmt == "csv":
        return "\n".join(",".join(row) for row in [head] + body) + "\n"
    lines = ["| " + " | ".join(head) + " |", "|" + "---|" * len(head)]
    lines += ["| " + " | ".join(row) + " |" for row in body]
    return "\n".join(lines) + "\n"
