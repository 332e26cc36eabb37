"""Edge-perspective degree distributions of irregular LDPC ensembles."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np


@dataclass(frozen=True)
class DegreeDistribution:
    """``lam``/``rho`` are ``(degree, edge fraction)`` pairs.

    The polynomial ``lambda(x) = 0.3317x + ...`` has coefficient ``lambda_i``
    on ``x**(i-1)``, so ``0.3317x`` is the fraction of edges attached to
    degree-2 variable nodes.
    """

    lam: tuple[tuple[int, float], ...]
    rho: tuple[tuple[int, float], ...]
    name: str = ""

    def __post_init__(self):
        for label, pairs in (("lambda", self.lam), ("rho", self.rho)):
            if abs(sum(f for _, f in pairs) - 1.0) > 1e-9:
                raise ValueError(f"{label} fractions must sum to 1")
            for deg, frac in pairs:
                if deg < 2 or not 0.0 < frac <= 1.0:
                    raise ValueError(f"bad {label} entry ({deg}, {frac})")


R05 = DegreeDistribution(
    lam=((2, 0.3317), (3, 0.2376), (6, 0.4307)),
    rho=((6, 0.6535), (7, 0.3465)),
    name="r05",
)
R075 = DegreeDistribution(
    lam=((2, 0.4249), (3, 0.0311), (5, 0.5440)),
    rho=((4, 0.8187), (5, 0.1813)),
    name="r075",
)
DISTRIBUTIONS = {"r05": R05, "r075": R075}
# compression rate (checks per variable) each distribution is meant for
NOMINAL_RATE = {"r05": Fraction(1, 2), "r075": Fraction(3, 4)}


def regular(dv: int, dc: int) -> DegreeDistribution:
    return DegreeDistribution(lam=((dv, 1.0),), rho=((dc, 1.0),), name=f"reg{dv}{dc}")


def design_rate(dist: DegreeDistribution) -> float:
    """Channel-code design rate ``1 - (sum rho_j/j) / (sum lambda_i/i)``."""
    lam_int = sum(f / d for d, f in dist.lam)
    rho_int = sum(f / d for d, f in dist.rho)
    return 1.0 - rho_int / lam_int


def largest_remainder(weights, total: int) -> np.ndarray:
    """Integer apportionment of ``total`` proportional to ``weights``."""
    w = np.asarray(weights, dtype=float)
    quota = total * w / w.sum()
    counts = np.floor(quota).astype(int)
    short = total - counts.sum()
    # stable sort keeps lower degree first among equal remainders
    order = np.argsort(-(quota - counts), kind="stable")
    counts[order[:short]] += 1
    return counts


def variable_degrees(dist: DegreeDistribution, n_vars: int) -> np.ndarray:
    """Per-node variable degrees, nondecreasing, from the edge-perspective lambda."""
    degs = [d for d, _ in dist.lam]
    counts = largest_remainder([f / d for d, f in dist.lam], n_vars)
    return np.repeat(degs, counts).astype(np.int64)
