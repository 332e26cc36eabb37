"""Progressive edge growth (Hu, Eleftheriou, Arnold) Tanner graph construction."""
from __future__ import annotations

import numpy as np

from .degree import DegreeDistribution, variable_degrees
from .matrix import ParityCheckMatrix


class ConstructionError(ValueError):
    pass


def _reach(j: int, var_adj, check_adj, n_checks: int):
    """Checks reachable from variable ``j``, expanded one tree level at a time.

    Returns the candidate set for the next edge of ``j``: the checks outside
    the subtree once it stops growing, or the checks first reached at the
    deepest level if the subtree covers every check.
    """
    seen = np.zeros(n_checks, dtype=bool)
    frontier = list(var_adj[j])
    seen[frontier] = True
    count = len(frontier)
    seen_vars = {j}
    while True:
        next_vars = set()
        for c in frontier:
            next_vars.update(check_adj[c])
        next_vars -= seen_vars
        seen_vars |= next_vars
        new_checks = []
        for v in next_vars:
            for c in var_adj[v]:
                if not seen[c]:
                    seen[c] = True
                    new_checks.append(c)
        if not new_checks:
            return np.flatnonzero(~seen)
        if count + len(new_checks) == n_checks:
            # one level before full coverage: the newly reached checks are farthest
            return np.asarray(new_checks)
        count += len(new_checks)
        frontier = new_checks


def peg_from_degrees(var_degrees, n_checks: int, seed: int = 0) -> ParityCheckMatrix:
    """Build a Tanner graph with the given variable degrees.

    Variables are processed in index order. The first edge of each variable
    goes to a check of minimum current degree; later edges go to a check at
    maximum distance in the current graph. Remaining ties are broken by lowest
    current check degree, then by lowest label, where check labels are a
    ``seed``-dependent permutation of the check indices.
    """
    var_degrees = np.asarray(var_degrees, dtype=np.int64)
    n_vars = var_degrees.size
    if n_checks < 1 or n_vars < 1:
        raise ConstructionError("need at least one variable and one check")
    if var_degrees.min() < 1:
        raise ConstructionError("variable degrees must be >= 1")
    if var_degrees.max() > n_checks:
        raise ConstructionError("a variable degree exceeds the number of checks")
    if var_degrees.sum() < n_checks:
        raise ConstructionError(
            f"infeasible: {var_degrees.sum()} edges cannot cover {n_checks} checks")

    label = np.random.default_rng(seed).permutation(n_checks)
    check_deg = np.zeros(n_checks, dtype=np.int64)
    var_adj = [[] for _ in range(n_vars)]
    check_adj = [[] for _ in range(n_checks)]

    def pick(cands):
        degs = check_deg[cands]
        tied = cands[degs == degs.min()]
        return int(tied[np.argmin(label[tied])])

    all_checks = np.arange(n_checks)
    for j in range(n_vars):
        for k in range(var_degrees[j]):
            cands = all_checks if k == 0 else _reach(j, var_adj, check_adj, n_checks)
            c = pick(cands)
            var_adj[j].append(c)
            check_adj[c].append(j)
            check_deg[c] += 1

    return ParityCheckMatrix(n_vars, check_adj)


def peg_construct(n_vars: int, n_checks: int, dist: DegreeDistribution,
                  seed: int = 0) -> ParityCheckMatrix:
    """PEG matrix whose variable degrees follow ``dist.lam``."""
    if n_checks >= n_vars:
        raise ConstructionError("a syndrome codec needs fewer checks than variables")
    return peg_from_degrees(variable_degrees(dist, n_vars), n_checks, seed)
