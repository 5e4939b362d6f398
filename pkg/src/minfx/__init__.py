"""Minimum-effect estimation under one-sided contamination.

Estimators for the location of uncontaminated Gaussian samples when an
unknown number of coordinates are shifted upward, scale estimation from
quantile differences, empirically rescaled p-values with step-up FDR
control and simultaneous post hoc bounds, and a deterministic Monte
Carlo harness for the equi-correlated testing experiments.
"""

from .backend import active_backend
from .cheb_estimators import (
    TUNING_A,
    ChebTuning,
    adaptive_estimate,
    cheb_estimate,
    degree_for_budget,
    laplace_stat,
    median_estimate,
    minimum_estimate,
    poly_laplace_stat,
    search_brackets,
)
from .chebyshev import ChebCoefficients, cheb_eval, cheb_exp_coeffs, cheb_exp_eval
from .gaussian import dyadic_round, even_floor, order_statistic, upper_tail, upper_tail_inverse
from .multiple_testing import (
    bh_procedure,
    clip_pvalues_for_export,
    fdp,
    level_transform,
    posthoc_bound,
    rescaled_pvalues,
    select_outliers,
    simes_event,
    tdp,
)
from .quantile_estimators import (
    adaptive_quantile_estimate,
    budget_quantile,
    budget_scale_quantile,
    location_scale_estimate,
    quantile_estimate,
    quantile_ladder,
    scale_estimate,
    upper_biased_estimate,
)
from .types import (
    DegenerateRegimeError,
    DegenerateScaleError,
    EstimatorResult,
    GroundTruth,
    InputError,
    MinfxError,
    Rescaling,
    ScaledEstimate,
    SelectionOutcome,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "active_backend",
    "TUNING_A",
    "ChebTuning",
    "ChebCoefficients",
    "DegenerateRegimeError",
    "DegenerateScaleError",
    "EstimatorResult",
    "GroundTruth",
    "InputError",
    "MinfxError",
    "Rescaling",
    "ScaledEstimate",
    "SelectionOutcome",
    "adaptive_estimate",
    "adaptive_quantile_estimate",
    "bh_procedure",
    "budget_quantile",
    "budget_scale_quantile",
    "cheb_estimate",
    "cheb_eval",
    "cheb_exp_coeffs",
    "cheb_exp_eval",
    "clip_pvalues_for_export",
    "degree_for_budget",
    "dyadic_round",
    "even_floor",
    "fdp",
    "laplace_stat",
    "level_transform",
    "location_scale_estimate",
    "median_estimate",
    "minimum_estimate",
    "order_statistic",
    "poly_laplace_stat",
    "posthoc_bound",
    "quantile_estimate",
    "quantile_ladder",
    "rescaled_pvalues",
    "scale_estimate",
    "search_brackets",
    "select_outliers",
    "simes_event",
    "tdp",
    "upper_biased_estimate",
    "upper_tail",
    "upper_tail_inverse",
]
