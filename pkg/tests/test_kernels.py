"""Cross-checks between the numba kernels and the numpy/scipy reference path."""

import math

import numpy as np
import pytest

from minfx import _kernels_numpy as knp
from minfx.backend import HAS_NUMBA

if HAS_NUMBA:
    from minfx import _kernels_numba as knb

needs_numba = pytest.mark.skipif(not HAS_NUMBA, reason="numba not installed")

from oracles import naive_bh


@needs_numba
def test_gauss_sf_agreement():
    xs = np.linspace(-12.0, 12.0, 20_001)
    a = knb.gauss_sf(xs)
    b = knp.gauss_sf(xs)
    assert np.max(np.abs(a - b)) <= 5e-16


@needs_numba
def test_gauss_isf_roundtrip_both_paths():
    ps = np.concatenate([np.linspace(1e-6, 1 - 1e-6, 5001),
                         np.array([1e-300, 1e-100, 1e-15])])
    for isf in (knb.gauss_isf, knp.gauss_isf):
        xs = isf(ps)
        back = knp.gauss_sf(xs)
        assert np.max(np.abs(back - ps)) <= 1e-13


@needs_numba
def test_pvalue_transform_agreement():
    rng = np.random.default_rng(0)
    y = rng.standard_normal(50_000) * 3.0 + 1.0
    a = knb.pvalue_transform(y, 0.5, 2.0)
    b = knp.pvalue_transform(y, 0.5, 2.0)
    assert np.max(np.abs(a - b)) <= 5e-16


@needs_numba
def test_bh_count_agreement_with_naive():
    rng = np.random.default_rng(1)
    for _ in range(300):
        n = int(rng.integers(1, 60))
        p = np.sort(np.round(rng.uniform(0, 1, n), 2))
        alpha = float(rng.uniform(0.01, 0.6))
        ell, _, _ = naive_bh(p, alpha)
        assert knb.bh_count(p, alpha) == ell
        assert knp.bh_count(p, alpha) == ell


@needs_numba
def test_log_mean_exp_scaled_agreement():
    rng = np.random.default_rng(2)
    y = rng.standard_normal(10_000)
    for c in (-5.0, -1.0, -1e-3, 2.7):
        a = knb.log_mean_exp_scaled(y, c)
        b = knp.log_mean_exp_scaled(y, c)
        assert a == pytest.approx(b, rel=1e-12, abs=1e-12)
        direct = math.log(np.mean(np.exp(c * y)))
        assert a == pytest.approx(direct, rel=1e-10, abs=1e-10)


def test_log_mean_exp_scaled_extreme_exponents():
    y = np.array([-500.0, 0.0, 300.0])
    v = knp.log_mean_exp_scaled(y, -3.0)
    # dominated by exp(1500), shifted evaluation must not overflow
    assert v == pytest.approx(1500.0 - math.log(3.0), rel=1e-12)
    if HAS_NUMBA:
        assert knb.log_mean_exp_scaled(y, -3.0) == pytest.approx(v, rel=1e-12)


def test_active_backend_reports_a_valid_name():
    from minfx.backend import active_backend
    assert active_backend() in ("numba", "numpy")


def test_env_flag_forces_numpy_backend():
    import subprocess
    import sys

    code = ("import minfx.backend as b; "
            "print(b.active_backend(), b.USE_NUMBA)")
    proc = subprocess.run([sys.executable, "-c", code], capture_output=True,
                          text=True, env={"MINFX_BACKEND": "numpy",
                                          "PATH": "/usr/bin:/bin"})
    assert proc.returncode == 0, proc.stderr
    assert proc.stdout.split() == ["numpy", "False"]


def test_env_flag_rejects_unknown_value():
    import subprocess
    import sys

    proc = subprocess.run([sys.executable, "-c", "import minfx.backend"],
                          capture_output=True, text=True,
                          env={"MINFX_BACKEND": "fortran",
                               "PATH": "/usr/bin:/bin"})
    assert proc.returncode != 0
