"""Shared value types, semantic errors and input validation helpers."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Mapping

import numpy as np


class MinfxError(Exception):
    """Base error for this package."""


class InputError(MinfxError, ValueError):
    """Inputs violate a contract: domain, shape or parameter range."""


class DegenerateRegimeError(MinfxError):
    """The requested estimator is outside its valid tuning regime."""


class DegenerateScaleError(MinfxError):
    """A scale estimate is nonpositive or its defining quantiles collapse."""


def as_sample(y: Any) -> np.ndarray:
    """Validate and return an observation vector as a 1-d float64 array.

    Requires at least one entry and all entries finite.
    """
    arr = np.asarray(y, dtype=np.float64)
    if arr.ndim != 1:
        arr = arr.reshape(-1)
    if arr.size < 1:
        raise InputError("sample must contain at least one observation")
    if not np.all(np.isfinite(arr)):
        raise InputError("sample entries must all be finite")
    return arr


def require_prob(p: Any, name: str = "p") -> float:
    """Require a probability strictly inside (0, 1)."""
    x = float(p)
    if not math.isfinite(x) or not 0.0 < x < 1.0:
        raise InputError(f"{name} must lie strictly in (0, 1), got {p!r}")
    return x


def require_int(value: Any, name: str, minimum: int | None = None,
                maximum: int | None = None) -> int:
    if not isinstance(value, (int, np.integer)) or isinstance(value, bool):
        raise InputError(f"{name} must be an integer, got {type(value).__name__}")
    v = int(value)
    if minimum is not None and v < minimum:
        raise InputError(f"{name} must be >= {minimum}, got {v}")
    if maximum is not None and v > maximum:
        raise InputError(f"{name} must be <= {maximum}, got {v}")
    return v


@dataclass(frozen=True)
class EstimatorResult:
    """A location estimate plus the tuning actually used to produce it."""

    value: float
    method: str
    tuning: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        # -inf is a legal convention for degenerate lower brackets, +nan is not.
        if math.isnan(self.value):
            raise InputError(f"estimator {self.method!r} produced NaN")


@dataclass(frozen=True)
class ScaledEstimate:
    """A joint location/scale estimate, with the sparsity bound it assumed."""

    theta: float
    sigma: float
    k0: int = 0
    tuning: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not math.isfinite(self.theta) or not math.isfinite(self.sigma):
            raise InputError("scaled estimate must be finite")
        if self.sigma < 0.0:
            raise InputError(f"scale estimate must be >= 0, got {self.sigma}")


@dataclass(frozen=True)
class Rescaling:
    """Location/scale pair used to correct p-values."""

    u: float
    s: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.u):
            raise InputError("rescaling location must be finite")
        if not math.isfinite(self.s) or self.s <= 0.0:
            raise InputError(f"rescaling scale must be > 0, got {self.s}")


@dataclass(frozen=True, eq=False)
class GroundTruth:
    """Which coordinates are genuine outliers, for metric evaluation.

    ``outliers`` holds the sorted 0-based indices of contaminated
    coordinates; everything else is a true null.
    """

    n: int
    outliers: np.ndarray

    def __post_init__(self) -> None:
        n = require_int(self.n, "n", minimum=1)
        idx = np.asarray(self.outliers, dtype=np.int64).reshape(-1)
        if idx.size and (idx.min() < 0 or idx.max() >= n):
            raise InputError("outlier indices out of range")
        idx = np.unique(idx)
        object.__setattr__(self, "outliers", idx)

    @property
    def n1(self) -> int:
        return int(self.outliers.size)

    @property
    def n0(self) -> int:
        return self.n - self.n1

    def outlier_mask(self) -> np.ndarray:
        mask = np.zeros(self.n, dtype=bool)
        mask[self.outliers] = True
        return mask


@dataclass(frozen=True, eq=False)
class SelectionOutcome:
    """Rejection set of a step-up procedure plus its internals."""

    rejected: np.ndarray
    ell_hat: int
    t_hat: float

    def __post_init__(self) -> None:
        idx = np.asarray(self.rejected, dtype=np.int64).reshape(-1)
        object.__setattr__(self, "rejected", np.sort(idx))
        if self.rejected.size != self.ell_hat:
            raise InputError(
                f"rejection count {self.rejected.size} does not match ell_hat {self.ell_hat}"
            )

    @property
    def size(self) -> int:
        return int(self.rejected.size)
