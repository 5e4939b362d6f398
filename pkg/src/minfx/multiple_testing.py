"""Rescaled p-values, step-up selection, and post hoc false discovery bounds.

p-values are one-sided upper-tail probabilities of location/scale
corrected observations.  The step-up rule rejects every index at or
below its data-driven threshold; ties at the threshold are all
rejected, never randomized.  The post hoc bound is a counting bound
valid simultaneously over every candidate subset whenever the
underlying simultaneous event holds.
"""

from __future__ import annotations

import numpy as np

from . import kernels
from .gaussian import upper_tail, upper_tail_inverse
from .quantile_estimators import upper_biased_estimate
from .types import (
    DegenerateScaleError,
    GroundTruth,
    InputError,
    Rescaling,
    SelectionOutcome,
    as_sample,
    require_prob,
)

__all__ = [
    "rescaled_pvalues",
    "bh_procedure",
    "fdp",
    "tdp",
    "posthoc_bound",
    "level_transform",
    "select_outliers",
    "simes_event",
    "clip_pvalues_for_export",
]

# Export clip keeps file output finite; in-memory values are never clipped.
_EXPORT_FLOOR = 1e-300


def rescaled_pvalues(y, rescaling: Rescaling) -> np.ndarray:
    """Upper-tail p-values of (y - u) / s for the given rescaling."""
    arr = as_sample(y)
    if not isinstance(rescaling, Rescaling):
        rescaling = Rescaling(*rescaling)
    return kernels.pvalue_transform(arr, rescaling.u, rescaling.s)


def _as_pvalues(p) -> np.ndarray:
    arr = np.asarray(p, dtype=np.float64).reshape(-1)
    if arr.size == 0:
        raise InputError("p-value vector must be nonempty")
    if not np.all((arr >= 0.0) & (arr <= 1.0)):
        raise InputError("p-values must lie in [0, 1]")
    return arr


def bh_procedure(p, alpha: float) -> SelectionOutcome:
    """Step-up selection at nominal level alpha.

    Finds the largest ell with p_(ell) <= alpha * ell / n (zero when
    none) and rejects every index with p at or below that threshold.
    """
    arr = _as_pvalues(p)
    alpha = require_prob(alpha, "alpha")
    n = arr.size
    p_sorted = np.sort(arr)
    ell = int(kernels.bh_count(p_sorted, alpha))
    t_hat = alpha * ell / n
    rejected = np.nonzero(arr <= t_hat)[0] if ell > 0 else np.empty(0, dtype=np.int64)
    return SelectionOutcome(rejected=rejected, ell_hat=ell, t_hat=t_hat)


def _as_index_set(selection) -> np.ndarray:
    if isinstance(selection, SelectionOutcome):
        return selection.rejected
    return np.unique(np.asarray(selection, dtype=np.int64).reshape(-1))


def fdp(selection, truth: GroundTruth) -> float:
    """Fraction of true nulls among the selected indices (0 for empty sets)."""
    idx = _as_index_set(selection)
    if idx.size and (idx.min() < 0 or idx.max() >= truth.n):
        raise InputError("selection indices out of range")
    if idx.size == 0:
        return 0.0
    false_hits = idx.size - np.isin(idx, truth.outliers, assume_unique=True).sum()
    return float(false_hits) / idx.size


def tdp(selection, truth: GroundTruth) -> float:
    """Fraction of true outliers that were selected (0 when there are none)."""
    idx = _as_index_set(selection)
    if idx.size and (idx.min() < 0 or idx.max() >= truth.n):
        raise InputError("selection indices out of range")
    if truth.n1 == 0 or idx.size == 0:
        return 0.0
    hits = int(np.isin(idx, truth.outliers, assume_unique=True).sum())
    return hits / truth.n1


def posthoc_bound(p, subset, alpha: float) -> float:
    """Simultaneous upper confidence bound on the false fraction of a subset.

    Evaluates, over thresholds alpha * ell / n, the count of subset
    p-values above the threshold plus ell - 1, normalized by the subset
    size and capped at one.  The minimum over ell is reached within
    ell <= |subset| + 1 because the count term is nonnegative, so the
    scan stops there; the result matches the full scan exactly.
    """
    arr = _as_pvalues(p)
    alpha = require_prob(alpha, "alpha")
    n = arr.size
    idx = _as_index_set(subset)
    if idx.size and (idx.min() < 0 or idx.max() >= n):
        raise InputError("subset indices out of range")
    size = int(idx.size)
    if size == 0:
        return 0.0
    sub_sorted = np.sort(arr[idx])
    ells = np.arange(1, min(n, size + 1) + 1)
    above = size - np.searchsorted(sub_sorted, alpha * ells / n, side="right")
    best = int((above + ells - 1).min())
    return min(1.0, best / size)


def level_transform(t: float, rescaling: Rescaling, truth_theta: float,
                    truth_sigma: float, direction: str = "forward") -> float:
    """Map a p-value threshold between the rescaled and oracle scales.

    Forward sends a threshold for rescaled p-values to the equivalent
    threshold for perfectly corrected ones; inverse undoes it.  The two
    compose to the identity.
    """
    t = require_prob(t, "t")
    if not isinstance(rescaling, Rescaling):
        rescaling = Rescaling(*rescaling)
    sigma = float(truth_sigma)
    if sigma <= 0.0:
        raise InputError("truth_sigma must be > 0")
    theta = float(truth_theta)
    if direction == "forward":
        return float(upper_tail(
            (rescaling.s / sigma) * upper_tail_inverse(t) + (rescaling.u - theta) / sigma
        ))
    if direction == "inverse":
        return float(upper_tail(
            (sigma / rescaling.s) * upper_tail_inverse(t) + (theta - rescaling.u) / rescaling.s
        ))
    raise InputError(f"direction must be 'forward' or 'inverse', got {direction!r}")


def select_outliers(y, alpha: float, k0: int) -> tuple[SelectionOutcome, Rescaling]:
    """Full selection pipeline: estimate the null scaling, rescale, step up.

    Returns the selection together with the rescaling actually used so
    the correction can be audited.  A nonpositive scale estimate is an
    error; no selection is emitted in that case.
    """
    arr = as_sample(y)
    alpha = require_prob(alpha, "alpha")
    est = upper_biased_estimate(arr, k0)
    if est.sigma <= 0.0:
        raise DegenerateScaleError(
            f"upper-biased scale estimate is nonpositive ({est.sigma})"
        )
    rescaling = Rescaling(u=est.theta, s=est.sigma)
    outcome = bh_procedure(rescaled_pvalues(arr, rescaling), alpha)
    return outcome, rescaling


def clip_pvalues_for_export(p) -> np.ndarray:
    """Clamp p-values into [1e-300, 1] so serialized output stays finite."""
    arr = np.asarray(p, dtype=np.float64)
    return np.clip(arr, _EXPORT_FLOOR, 1.0)


def simes_event(null_pvalues, alpha: float, n_total: int) -> bool:
    """Whether some ordered null p-value drops below its step threshold.

    Thresholds are alpha * ell / n_total for ell = 1 .. (number of
    nulls); this is the event whose rarity underwrites the post hoc
    bound.
    """
    arr = _as_pvalues(null_pvalues)
    alpha = require_prob(alpha, "alpha")
    if n_total < arr.size:
        raise InputError("n_total must be at least the number of null p-values")
    srt = np.sort(arr)
    ells = np.arange(1, arr.size + 1)
    return bool(np.any(srt <= alpha * ells / n_total))
