"""Kernel backend selection.

The hot numeric loops (Gaussian tail transforms, p-value rescaling, the
step-up threshold scan and the exponential-sum reductions) exist twice:
as numba-jitted kernels and as a numpy/scipy reference path.  Selection
is controlled by the ``MINFX_BACKEND`` environment variable:

* ``auto`` (default): use numba when it imports, numpy otherwise;
* ``numba``: require numba, raise if unavailable;
* ``numpy``: force the reference path even when numba is installed.

Both paths implement identical formulas; they may differ by an ulp.
"""

from __future__ import annotations

import os

_MODE = os.environ.get("MINFX_BACKEND", "auto").strip().lower()
if _MODE not in ("auto", "numba", "numpy"):
    raise RuntimeError(f"MINFX_BACKEND must be auto, numba or numpy, got {_MODE!r}")

try:
    import numba  # noqa: F401

    HAS_NUMBA = True
except ImportError:
    HAS_NUMBA = False

if _MODE == "numba" and not HAS_NUMBA:
    raise RuntimeError("MINFX_BACKEND=numba but numba is not importable")

USE_NUMBA = HAS_NUMBA if _MODE == "auto" else (_MODE == "numba")


def active_backend() -> str:
    """Name of the kernel path selected at import time."""
    return "numba" if USE_NUMBA else "numpy"
