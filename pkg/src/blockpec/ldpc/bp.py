"""Belief-propagation syndrome decoding with a compiled or numpy backend.

The compiled extension ``_bp`` is used when importable; setting
``BLOCKPEC_PURE_PYTHON=1`` forces the numpy fallback.
"""
from __future__ import annotations

import math
import os

import numpy as np

from . import _bp_py

try:
    if os.environ.get("BLOCKPEC_PURE_PYTHON"):
        raise ImportError("pure-python backend requested")
    from . import _bp as _bp_c
except ImportError:
    _bp_c = None

BACKENDS = {"python": _bp_py.bp_decode}
if _bp_c is not None:
    BACKENDS["cython"] = _bp_c.bp_decode
BACKEND = "cython" if _bp_c is not None else "python"

P_FLOOR = 1e-12


def channel_llr(side, p: float) -> np.ndarray:
    """Per-bit LLR ``(1 - 2 z) ln((1-p)/p)`` of a BSC(p) observation ``z``."""
    if not 0.0 <= p < 0.5:
        raise ValueError(f"crossover must be in [0, 0.5), got {p}")
    p = max(p, P_FLOOR)
    mag = math.log((1.0 - p) / p)
    return (1.0 - 2.0 * np.asarray(side, dtype=np.float64)) * mag


def bp_decode_arrays(matrix, syndrome, llr, max_iter: int = 100, backend: str | None = None):
    """Run the decoder on raw arrays; returns ``(bits, success, iterations)``."""
    fn = BACKENDS[backend or BACKEND]
    return fn(matrix.check_ptr, matrix.edge_var, matrix.var_ptr, matrix.var_edges,
              np.ascontiguousarray(syndrome, dtype=np.uint8),
              np.ascontiguousarray(llr, dtype=np.float64), int(max_iter))
