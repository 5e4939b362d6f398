"""Dispatch layer over the numba and numpy kernel implementations.

Import the functions from here; the backend is fixed at import time by
``minfx.backend`` (see the ``MINFX_BACKEND`` environment variable).
"""

from __future__ import annotations

from .backend import USE_NUMBA, active_backend

if USE_NUMBA:
    from ._kernels_numba import (
        bh_count,
        gauss_isf,
        gauss_sf,
        log_mean_exp_scaled,
        pvalue_transform,
    )
else:
    from ._kernels_numpy import (
        bh_count,
        gauss_isf,
        gauss_sf,
        log_mean_exp_scaled,
        pvalue_transform,
    )

__all__ = [
    "active_backend",
    "bh_count",
    "gauss_isf",
    "gauss_sf",
    "log_mean_exp_scaled",
    "pvalue_transform",
]
