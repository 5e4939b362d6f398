"""Bias-corrected quantile estimators for general one-sided contamination.

Contamination only pushes observations upward, so low order statistics
stay informative about the uncontaminated location.  The estimators
here debias a chosen quantile with the matching Gaussian quantile,
estimate scale from quantile differences, and adapt the quantile choice
to an unknown contamination budget with a pairwise comparison rule.
The upper-biased variant feeds the multiple testing pipeline: it
prefers overestimating location and scale, which protects the false
discovery control of the rescaled procedures.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .gaussian import dyadic_round, upper_tail_inverse
from .types import (
    DegenerateScaleError,
    EstimatorResult,
    InputError,
    ScaledEstimate,
    as_sample,
    require_int,
)

__all__ = [
    "quantile_estimate",
    "budget_quantile",
    "budget_scale_quantile",
    "scale_estimate",
    "location_scale_estimate",
    "adaptive_quantile_estimate",
    "upper_biased_estimate",
    "upper_biased_denominator",
    "upper_biased_ranks",
    "quantile_ladder",
    "lepski_max_select",
]


def _floor_root_pow(n: int, num: int, den: int) -> int:
    """Exact floor(n ** (num / den)) for positive integers."""
    r = int(n ** (num / den))
    while (r + 1) ** den <= n**num:
        r += 1
    while r > 0 and r**den > n**num:
        r -= 1
    return r


def _ceil_root_pow(n: int, num: int, den: int) -> int:
    r = _floor_root_pow(n, num, den)
    return r if r**den == n**num else r + 1


def quantile_estimate(y, q: int) -> EstimatorResult:
    """Debiased q-th order statistic, valid for q up to the median rank."""
    arr = as_sample(y)
    n = arr.size
    half = (n + 1) // 2
    q = require_int(q, "q", minimum=1, maximum=half)
    debias = upper_tail_inverse(q / n)
    value = float(np.partition(arr, q - 1)[q - 1]) + debias
    return EstimatorResult(value=value, method="quantile",
                           tuning={"q": q, "debias": debias, "n": n})


def budget_quantile(k: int, n: int) -> int:
    """Quantile rank tuned to a contamination budget of k out of n.

    Median rank for sparse budgets, a dyadically rounded interpolation
    in between, and rank one when almost everything is contaminated.
    """
    n = require_int(n, "n", minimum=2)
    k = require_int(k, "k", minimum=1, maximum=n - 1)
    if k * k < 16 * n:
        return (n + 1) // 2
    if n - k >= _ceil_root_pow(n, 4, 5):
        return int(dyadic_round(n**1.25 / math.sqrt(k), "up"))
    return 1


def budget_scale_quantile(k: int, n: int) -> int:
    """Companion lower rank used by the scale estimator for budget k."""
    n = require_int(n, "n", minimum=3)
    k = require_int(k, "k", minimum=1, maximum=n - 2)
    if k * k < 16 * n:
        return -(-n // 3)
    if n - k >= _ceil_root_pow(n, 4, 5):
        return int(dyadic_round(n**1.75 / k**1.5, "down"))
    return 1


def scale_estimate(y, q: int, q_prime: int) -> float:
    """Scale from a rescaled difference of two order statistics.

    Equal ranks return 0 by the 0/0 convention; the extreme rank q = n
    behaves likewise because its debiasing quantile diverges.
    """
    arr = as_sample(y)
    n = arr.size
    q = require_int(q, "q", minimum=1, maximum=n)
    q_prime = require_int(q_prime, "q_prime", minimum=1, maximum=q)
    if q == q_prime or q == n:
        return 0.0
    srt = np.sort(arr)
    denom = upper_tail_inverse(q_prime / n) - upper_tail_inverse(q / n)
    return float(srt[q - 1] - srt[q_prime - 1]) / denom


def location_scale_estimate(y, q: int, q_prime: int) -> ScaledEstimate:
    """Joint location/scale estimate from the rank pair (q, q_prime)."""
    arr = as_sample(y)
    n = arr.size
    sigma = scale_estimate(arr, q, q_prime)
    base = float(np.sort(arr)[q - 1])
    theta = base if sigma == 0.0 else base + sigma * upper_tail_inverse(q / n)
    return ScaledEstimate(theta=theta, sigma=sigma,
                          tuning={"q": q, "q_prime": q_prime, "n": n})


@lru_cache(maxsize=64)
def quantile_ladder(n: int) -> tuple[int, ...]:
    """Sorted distinct budget quantiles over every k, capped at the median rank.

    Materialized by evaluating the budget rule for k = 1 .. n-1; the
    result contains rank one, the median rank, and a dyadic band in
    between.  Ranks above the median (possible right at the sparse
    regime boundary) are capped so every ladder member stays inside the
    quantile estimator's domain.
    """
    n = require_int(n, "n", minimum=2)
    half = (n + 1) // 2
    ks = np.arange(1, n, dtype=np.int64)
    q = np.empty(ks.shape[0], dtype=np.int64)
    sparse = ks * ks < 16 * n
    cutoff = _ceil_root_pow(n, 4, 5)
    middle = (~sparse) & (n - ks >= cutoff)
    extreme = (~sparse) & (~middle)
    q[sparse] = half
    q[extreme] = 1
    if middle.any():
        ratio = n**1.25 / np.sqrt(ks[middle].astype(np.float64))
        v = np.exp2(np.ceil(np.log2(ratio)))
        v = np.where(v * 0.5 >= ratio, v * 0.5, v)
        v = np.where(v < ratio, v * 2.0, v)
        q[middle] = v.astype(np.int64)
    return tuple(int(v) for v in np.unique(np.minimum(q, half)))


def lepski_max_select(candidates: list[tuple[int, float, float]]) -> int:
    """Index of the largest rung consistent with every smaller rung.

    ``candidates`` holds (rung, value, delta) sorted by rung; delta is
    applied when the rung is the smaller of a compared pair.  The
    smallest rung passes vacuously.
    """
    for i in range(len(candidates) - 1, -1, -1):
        value = candidates[i][1]
        ok = True
        for _, other_value, other_delta in candidates[:i]:
            if abs(value - other_value) > other_delta:
                ok = False
                break
        if ok:
            return i
    return 0


def adaptive_quantile_estimate(y, c0: float = 2.0) -> EstimatorResult:
    """Budget-adaptive quantile estimator via pairwise comparisons.

    Selects the largest ladder rank whose estimate stays within the
    rank-dependent tolerance of every smaller rank.  The comparison
    constant c0 defaults to 2.0 and is exposed because the theory only
    requires it to be large enough.
    """
    arr = as_sample(y)
    n = arr.size
    if n < 4:
        raise InputError("adaptive quantile estimator needs n >= 4")
    c0 = float(c0)
    if not c0 > 0.0:
        raise InputError(f"c0 must be > 0, got {c0}")
    ladder = quantile_ladder(n)
    srt = np.sort(arr)
    log_n = math.log(n)

    def delta(q: int) -> float:
        if q**4 < 4 * n:
            return c0 * math.sqrt(log_n)
        return c0 * n ** (1.0 / 6.0) / (q ** (2.0 / 3.0) * math.sqrt(max(math.log(n / q), 1.0)))

    candidates = [
        (q, float(srt[q - 1]) + upper_tail_inverse(q / n), delta(q)) for q in ladder
    ]
    chosen = lepski_max_select(candidates)
    q_hat, value, _ = candidates[chosen]
    return EstimatorResult(
        value=value,
        method="adaptive-osc",
        tuning={"q_hat": q_hat, "ladder_size": len(ladder), "c0": c0, "n": n},
    )


def upper_biased_ranks(n: int) -> tuple[int, int]:
    """Order-statistic ranks (floor n^(3/4), floor n^(1/4)) of the upper-biased pair."""
    n = require_int(n, "n", minimum=16)
    return _floor_root_pow(n, 3, 4), _floor_root_pow(n, 1, 4)


def upper_biased_denominator(n: int, k0: int) -> float:
    """Quantile-difference denominator of the upper-biased scale estimate.

    Positive for every sample size the pipeline supports; the sparsity
    bound k0 widens the lower quantile argument from q'/n to q'/(n-k0).
    """
    n = require_int(n, "n", minimum=16)
    k0 = require_int(k0, "k0", minimum=0, maximum=int(0.9 * n))
    q_n = _floor_root_pow(n, 3, 4)
    qp_n = _floor_root_pow(n, 1, 4)
    p_hi = qp_n / (n - k0)
    if p_hi >= 0.5:
        raise DegenerateScaleError(
            f"k0={k0} leaves too few coordinates at n={n}: quantile argument "
            f"{p_hi:.3f} is not in the left tail"
        )
    return upper_tail_inverse(p_hi) - upper_tail_inverse(q_n / n)


def upper_biased_estimate(y, k0: int) -> ScaledEstimate:
    """Upwards-biased location/scale pair for p-value rescaling.

    Assumes the true number of contaminated coordinates is at most k0;
    that assumption is not checkable from data and is simply trusted.
    Raises DegenerateScaleError when the defining quantile difference
    is not positive.
    """
    arr = as_sample(y)
    n = arr.size
    if n < 16:
        raise InputError(f"upper-biased estimate needs n >= 16, got {n}")
    k0 = require_int(k0, "k0", minimum=0, maximum=int(0.9 * n))
    q_n = _floor_root_pow(n, 3, 4)
    qp_n = _floor_root_pow(n, 1, 4)
    denom = upper_biased_denominator(n, k0)
    if denom <= 0.0:
        raise DegenerateScaleError(
            f"nonpositive quantile spread at n={n}, k0={k0}"
        )
    srt = np.sort(arr)
    sigma = float(srt[q_n - 1] - srt[qp_n - 1]) / denom
    theta = float(srt[q_n - 1]) + sigma * upper_tail_inverse(q_n / n)
    return ScaledEstimate(
        theta=theta,
        sigma=sigma,
        k0=k0,
        tuning={"q_n": q_n, "q_prime_n": qp_n, "denominator": denom, "n": n},
    )
