"""Reference kernel implementations on numpy + scipy.special."""

from __future__ import annotations

import numpy as np
from scipy import special


def gauss_sf(x: np.ndarray) -> np.ndarray:
    """Standard normal upper tail, elementwise."""
    return special.ndtr(-np.asarray(x, dtype=np.float64))


def gauss_isf(p: np.ndarray) -> np.ndarray:
    """Inverse of the standard normal upper tail, elementwise."""
    return -special.ndtri(np.asarray(p, dtype=np.float64))


def pvalue_transform(y: np.ndarray, u: float, s: float) -> np.ndarray:
    """Upper-tail p-values of (y - u) / s."""
    return special.ndtr((u - y) / s)


def bh_count(p_sorted: np.ndarray, alpha: float) -> int:
    """Largest ell with p_(ell) <= alpha * ell / n (0 when none)."""
    n = p_sorted.shape[0]
    hits = p_sorted <= alpha * np.arange(1, n + 1) / n
    if not hits.any():
        return 0
    return int(n - np.argmax(hits[::-1]))


def log_mean_exp_scaled(y: np.ndarray, c: float) -> float:
    """log( mean_i exp(c * y_i) ), evaluated with a max-exponent shift."""
    v = c * y
    m = float(v.max())
    return m + float(np.log(np.mean(np.exp(v - m))))
