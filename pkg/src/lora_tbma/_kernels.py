"""Hot numeric kernels: numba-compiled loops with a pure-NumPy fallback.

The backend is picked once at import time.  Set ``LORA_TBMA_NO_NUMBA=1``
to force the NumPy path (also taken automatically when numba is not
installed).  Both paths compute the same quantities; they are compared in
``benchmarks/bench_kernels.py``.
"""
from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit, prange

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - depends on environment
    HAS_NUMBA = False


def _numba_disabled_by_env() -> bool:
    return os.environ.get("LORA_TBMA_NO_NUMBA", "").strip().lower() in {
        "1",
        "true",
        "yes",
        "on",
    }


USE_NUMBA = HAS_NUMBA and not _numba_disabled_by_env()


# ---------------------------------------------------------------------------
# NumPy implementations
# ---------------------------------------------------------------------------


def matched_filter_scores_numpy(y: np.ndarray, templates: np.ndarray) -> np.ndarray:
    """Correlate each row of ``y`` (B, N) against every template row (K, N)."""
    return y @ templates.T


def chi_square_curve_numpy(pmfs: np.ndarray, r: np.ndarray) -> np.ndarray:
    """sum_n (p[g, n] - r[n])^2 / p[g, n] for every grid row g."""
    d = pmfs - r[None, :]
    return np.sum(d * d / pmfs, axis=1)


# ---------------------------------------------------------------------------
# Numba implementations
# ---------------------------------------------------------------------------

if HAS_NUMBA:

    @njit(parallel=True, cache=True)
    def _matched_filter_scores_numba(y, templates):  # pragma: no cover - jit
        b, n = y.shape
        k = templates.shape[0]
        out = np.empty((b, k))
        for i in prange(b):
            for j in range(k):
                acc = 0.0
                for t in range(n):
                    acc += y[i, t] * templates[j, t]
                out[i, j] = acc
        return out

    @njit(parallel=True, cache=True)
    def _chi_square_curve_numba(pmfs, r):  # pragma: no cover - jit
        g, n = pmfs.shape
        out = np.empty(g)
        for i in prange(g):
            acc = 0.0
            for t in range(n):
                d = pmfs[i, t] - r[t]
                acc += d * d / pmfs[i, t]
            out[i] = acc
        return out


if USE_NUMBA:

    def matched_filter_scores(y: np.ndarray, templates: np.ndarray) -> np.ndarray:
        y = np.ascontiguousarray(y, dtype=np.float64)
        templates = np.ascontiguousarray(templates, dtype=np.float64)
        return _matched_filter_scores_numba(y, templates)

    def chi_square_curve(pmfs: np.ndarray, r: np.ndarray) -> np.ndarray:
        pmfs = np.ascontiguousarray(pmfs, dtype=np.float64)
        r = np.ascontiguousarray(r, dtype=np.float64)
        return _chi_square_curve_numba(pmfs, r)

else:
    matched_filter_scores = matched_filter_scores_numpy
    chi_square_curve = chi_square_curve_numpy
