"""Standard normal tail helpers, order statistics and rounding conventions.

Everything downstream differences Gaussian quantiles, so the tail
functions target 1e-14 absolute accuracy (a 1e-7 approximation would
visibly pollute the quantile-difference scale estimates at large n).
"""

from __future__ import annotations

import math

import numpy as np

from . import kernels
from .types import InputError, as_sample, require_prob

__all__ = [
    "upper_tail",
    "upper_tail_inverse",
    "order_statistic",
    "dyadic_round",
    "even_floor",
]

_SQRT2 = math.sqrt(2.0)
_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)


def upper_tail(t):
    """P(Z > t) for standard normal Z; scalar in, scalar out, array in, array out."""
    if np.ndim(t) == 0:
        x = float(t)
        if not math.isfinite(x):
            raise InputError("upper_tail requires a finite argument")
        return 0.5 * math.erfc(x / _SQRT2)
    arr = np.ascontiguousarray(t, dtype=np.float64)
    if not np.all(np.isfinite(arr)):
        raise InputError("upper_tail requires finite arguments")
    return kernels.gauss_sf(arr.reshape(-1)).reshape(arr.shape)


def _isf_scalar(p: float) -> float:
    # rational initial guess plus two Newton steps on the tail itself
    x = float(kernels.gauss_isf(np.array([p], dtype=np.float64))[0])
    for _ in range(2):
        phi = math.exp(-0.5 * x * x) * _INV_SQRT_2PI
        if phi <= 0.0:
            break
        x = x + (0.5 * math.erfc(x / _SQRT2) - p) / phi
    return x


def upper_tail_inverse(p):
    """The unique t with upper_tail(t) = p, for p strictly inside (0, 1).

    Round trip accuracy: |upper_tail(upper_tail_inverse(p)) - p| <= 1e-13.
    """
    if np.ndim(p) == 0:
        return _isf_scalar(require_prob(p, "p"))
    arr = np.ascontiguousarray(p, dtype=np.float64)
    if not np.all((arr > 0.0) & (arr < 1.0)):
        raise InputError("upper_tail_inverse requires probabilities in (0, 1)")
    return kernels.gauss_isf(arr.reshape(-1)).reshape(arr.shape)


def order_statistic(y, q: int, m: int | None = None) -> float:
    """The q-th smallest entry of y, optionally among the first m entries only.

    Ties resolve by sorted multiset order.  Uses a full sort; callers
    that need many quantiles should sort once themselves.
    """
    arr = as_sample(y)
    n = arr.size
    if m is not None:
        if not 1 <= int(m) <= n:
            raise InputError(f"m must lie in [1, {n}], got {m}")
        arr = arr[: int(m)]
    limit = arr.size
    if not 1 <= int(q) <= limit:
        raise InputError(f"q must lie in [1, {limit}], got {q}")
    return float(np.sort(arr)[int(q) - 1])


def dyadic_round(x: float, direction: str) -> float:
    """Round a positive number to a power of two, downward or upward."""
    v = float(x)
    if not math.isfinite(v) or v <= 0.0:
        raise InputError(f"dyadic_round requires x > 0, got {x!r}")
    if direction not in ("up", "down"):
        raise InputError(f"direction must be 'up' or 'down', got {direction!r}")
    if direction == "down":
        r = 2.0 ** math.floor(math.log2(v))
        # snap against one-ulp log2 error
        while r > v:
            r *= 0.5
        while r * 2.0 <= v:
            r *= 2.0
    else:
        r = 2.0 ** math.ceil(math.log2(v))
        while r * 0.5 >= v:
            r *= 0.5
        while r < v:
            r *= 2.0
    return r


def even_floor(x: float) -> int:
    """Largest even integer <= x.  May be zero or negative; not clamped."""
    return 2 * math.floor(float(x) / 2.0)
