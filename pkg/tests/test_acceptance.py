"""End-to-end acceptance criteria, one test per criterion.

Each test prints a single PASS/FAIL line to the terminal as it
completes.  Tolerances are fixed here, not tuned at run time; Monte
Carlo checks use frozen seeds.
"""

import json
import math
import os
import time
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from conftest import record_acceptance_line

import minfx
from minfx import chebyshev, cli, simulate
from minfx.multiple_testing import bh_procedure, fdp, posthoc_bound, rescaled_pvalues, simes_event
from minfx.report import csv_bytes
from minfx.types import GroundTruth, Rescaling

from oracles import naive_bh, naive_posthoc

pytestmark = pytest.mark.acceptance

_THREADS = min(4, os.cpu_count() or 1)


def _report(criterion: str, ok: bool, detail: str) -> None:
    line = f"ACCEPTANCE {criterion}: {'PASS' if ok else 'FAIL'} ({detail})"
    print(line)
    record_acceptance_line(line)
    assert ok, line


def test_01_chebyshev_expansion_matches_closed_form():
    start = time.perf_counter()
    worst = 0.0
    xs = np.linspace(-5.0, 2.0, 200)
    for q in range(2, 22, 2):
        for x in xs:
            x = float(x)
            w = 2.0 * math.exp(x) - 1.0
            closed = math.cosh(q * math.acosh(w)) if w >= 1.0 else math.cos(q * math.acos(w))
            got = chebyshev.cheb_exp_expansion(q, x)
            worst = max(worst, abs(got - closed) / abs(closed))
    elapsed = time.perf_counter() - start
    _report("01 chebyshev-fidelity", worst <= 1e-9 and elapsed < 1.0,
            f"max rel err {worst:.2e}, {elapsed:.2f}s")


def test_02_coefficient_bound_and_sum():
    start = time.perf_counter()
    ok = True
    for q in range(2, 42, 2):
        coeffs = chebyshev.cheb_exp_coeffs(q).exact
        # exact bound: (3 + 2 sqrt 2)^q sits just below the integer s_q
        # with s_0 = 2, s_1 = 6, s_j = 6 s_{j-1} - s_{j-2}
        s_prev, s_cur = 2, 6
        for _ in range(q - 1):
            s_prev, s_cur = s_cur, 6 * s_cur - s_prev
        ok &= max(abs(a) for a in coeffs) <= s_cur - 1
        ok &= sum(coeffs) == 1
    elapsed = time.perf_counter() - start
    _report("02 coefficient-bound", ok and elapsed < 1.0, f"{elapsed:.2f}s")


def _independent_sample(rng, n, n1, delta):
    y = rng.standard_normal(n)
    y[:n1] += delta
    return y


def test_03_oracle_bh_fdr_equality():
    start = time.perf_counter()
    n, n1, delta, alpha, reps = 200, 20, 2.0, 0.2, 20_000
    truth = GroundTruth(n=n, outliers=np.arange(n1))
    oracle = Rescaling(0.0, 1.0)
    fdps = np.empty(reps)
    for r in range(reps):
        y = _independent_sample(simulate.rng_stream(301, r), n, n1, delta)
        fdps[r] = fdp(bh_procedure(rescaled_pvalues(y, oracle), alpha), truth)
    target = (n - n1) / n * alpha
    se = fdps.std(ddof=1) / math.sqrt(reps)
    err = abs(fdps.mean() - target)
    elapsed = time.perf_counter() - start
    _report("03 oracle-bh-fdr-equality", err <= 3.0 * se and elapsed < 60.0,
            f"fdr {fdps.mean():.4f} vs {target:.4f}, 3se {3 * se:.4f}, {elapsed:.1f}s")


def test_04_oracle_simes_coverage():
    start = time.perf_counter()
    n, n1, delta, alpha, reps = 200, 20, 2.0, 0.2, 20_000
    null_mask = np.ones(n, dtype=bool)
    null_mask[:n1] = False
    oracle = Rescaling(0.0, 1.0)
    hits = 0
    for r in range(reps):
        y = _independent_sample(simulate.rng_stream(401, r), n, n1, delta)
        p = rescaled_pvalues(y, oracle)
        hits += simes_event(p[null_mask], alpha, n)
    freq = hits / reps
    se = math.sqrt(freq * (1 - freq) / reps)
    elapsed = time.perf_counter() - start
    _report("04 oracle-simes-coverage", freq <= alpha + 3.0 * se and elapsed < 60.0,
            f"freq {freq:.4f} <= {alpha} + {3 * se:.4f}, {elapsed:.1f}s")


def test_05_posthoc_exhaustive_validity():
    start = time.perf_counter()
    n, n1, delta, alpha, reps = 12, 4, 2.0, 0.2, 500
    null_mask = np.ones(n, dtype=bool)
    null_mask[:n1] = False
    null_bits = sum(1 << i for i in range(n) if null_mask[i])
    subsets = [np.nonzero([(s >> i) & 1 for i in range(n)])[0] for s in range(1 << n)]
    popcount = np.array([bin(s).count("1") for s in range(1 << n)])
    false_counts = np.array([bin(s & null_bits).count("1") for s in range(1 << n)])
    true_fdp = false_counts / np.maximum(popcount, 1)
    oracle = Rescaling(0.0, 1.0)
    checked, violations = 0, 0
    for r in range(reps):
        y = _independent_sample(simulate.rng_stream(501, r), n, n1, delta)
        p = rescaled_pvalues(y, oracle)
        if simes_event(p[null_mask], alpha, n):
            continue
        checked += 1
        bounds = np.array([posthoc_bound(p, s, alpha) for s in subsets])
        violations += int(np.any(true_fdp > bounds + 1e-12))
    elapsed = time.perf_counter() - start
    _report("05 posthoc-exhaustive",
            violations == 0 and checked > 0 and elapsed < 120.0,
            f"{checked}/{reps} replications checked, {violations} violations, {elapsed:.1f}s")


def test_06_rescaled_bh_fdr_desk_scale():
    start = time.perf_counter()
    cfg = simulate.FdrConfig(n=100_000, rho=0.3, n1=10_000, delta=3.0,
                             alpha=0.2, k0=None, reps=100, seed=601)
    report = simulate.run_fdr_experiment(cfg, threads=_THREADS)
    agg = report.aggregates
    fdr_unknown = agg["rho_unknown"]["fdr"]
    fdr_oracle = agg["oracle"]["fdr"]
    tdp_unknown = agg["rho_unknown"]["tdp_mean"]
    tdp_oracle = agg["oracle"]["tdp_mean"]
    ok = (fdr_unknown <= 0.2 + 0.03
          and abs(fdr_unknown - fdr_oracle) <= 0.05
          and abs(tdp_unknown - tdp_oracle) <= 0.05)
    elapsed = time.perf_counter() - start
    _report("06 rescaled-bh-desk-scale", ok and elapsed < 300.0,
            f"fdr {fdr_unknown:.3f} (oracle {fdr_oracle:.3f}), "
            f"tdp {tdp_unknown:.3f} (oracle {tdp_oracle:.3f}), {elapsed:.0f}s")


def test_07_full_scale_figure_regeneration(tmp_path):
    start = time.perf_counter()
    iqr = {}
    for delta in (2.0, 3.0):
        out = tmp_path / f"delta{delta:g}"
        code = cli.main([
            "simulate", "--experiment", "fdr", "--n", "1000000", "--reps", "100",
            "--seed", "701", "--rho", "0.3", "--n1-frac", "0.1",
            "--delta", str(delta), "--alpha", "0.2",
            "--threads", str(_THREADS), "--out", str(out), "--plot",
        ])
        assert code == 0
        svg = out / "fdr_plot.svg"
        tree = ET.parse(svg)
        boxes = [el for el in tree.iter() if el.tag.endswith("g")
                 and el.attrib.get("id", "").startswith("box-fdp-")]
        assert len(boxes) == len(simulate.VARIANTS)
        report = json.loads((out / "fdr_report.json").read_text())
        iqr[delta] = {
            v: report["aggregates"][v]["fdp_box"]["q3"] - report["aggregates"][v]["fdp_box"]["q1"]
            for v in simulate.VARIANTS
        }
    elapsed = time.perf_counter() - start
    stabilized = all(
        iqr[d][v] < iqr[d]["uncorrected"]
        for d in (2.0, 3.0) for v in ("oracle", "rho_known", "rho_unknown")
    )
    _report("07 full-scale-figure",
            stabilized and elapsed < 900.0,
            f"FDP IQRs {({d: {k: round(x, 3) for k, x in m.items()} for d, m in iqr.items()})}, "
            f"{elapsed:.0f}s")


def test_08_upper_biased_deviation():
    start = time.perf_counter()
    n, reps = 10_000, 2000
    k0 = int(0.9 * n)
    slack = float(n) ** (-1.0 / 16.0)
    theta_low = sigma_low = 0
    for r in range(reps):
        y = simulate.rng_stream(801, r).standard_normal(n)
        est = minfx.upper_biased_estimate(y, k0)
        theta_low += est.theta - 0.0 <= -slack
        sigma_low += est.sigma - 1.0 <= -slack
    f_theta, f_sigma = theta_low / reps, sigma_low / reps
    elapsed = time.perf_counter() - start
    _report("08 upper-biased-deviation",
            f_theta <= 0.05 and f_sigma <= 0.05 and elapsed < 60.0,
            f"freqs {f_theta:.4f}/{f_sigma:.4f}, {elapsed:.1f}s")


def test_09_median_risk_scaling():
    start = time.perf_counter()
    cfg = simulate.RiskConfig(n_grid=(100, 10_000), k_grid=(0,),
                              estimators=("median",), reps=5000, seed=901)
    report = simulate.run_risk_experiment(cfg, threads=_THREADS)
    risks = {rec["n"]: rec["mean_abs_err"] for rec in report.records}
    ratio = risks[10_000] / risks[100]
    elapsed = time.perf_counter() - start
    _report("09 median-risk-scaling", 0.06 <= ratio <= 0.16 and elapsed < 60.0,
            f"ratio {ratio:.4f}, {elapsed:.1f}s")


def test_10_brute_force_oracle_equivalences():
    start = time.perf_counter()
    rng = np.random.default_rng(1001)
    ok = True
    for _ in range(10_000):
        n = int(rng.integers(1, 51))
        p = np.round(rng.uniform(0, 1, n), 2)
        alpha = float(rng.uniform(0.02, 0.6))
        ell, t_hat, rejected = naive_bh(p, alpha)
        out = bh_procedure(p, alpha)
        ok &= out.ell_hat == ell and list(out.rejected) == rejected
        size = int(rng.integers(0, n + 1))
        subset = np.sort(rng.choice(n, size=size, replace=False))
        ok &= abs(posthoc_bound(p, subset, alpha) - naive_posthoc(p, subset, alpha)) < 1e-12
        y = rng.standard_normal(n)
        q = int(rng.integers(1, n + 1))
        ok &= minfx.order_statistic(y, q) == sorted(y)[q - 1]
        if not ok:
            break
    elapsed = time.perf_counter() - start
    _report("10 brute-force-equivalences", ok and elapsed < 60.0, f"{elapsed:.1f}s")


def test_11_determinism_across_thread_counts():
    start = time.perf_counter()
    runs = {
        "fdr": lambda t: simulate.run_fdr_experiment(
            simulate.FdrConfig(n=2000, n1=200, delta=2.0, reps=6, seed=1101), threads=t),
        "roc": lambda t: simulate.run_roc_experiment(
            simulate.RocConfig(n=1000, n1=100, delta=2.5, reps=4, seed=1102), threads=t),
        "posthoc": lambda t: simulate.run_posthoc_experiment(
            simulate.PosthocConfig(n=500, n1=25, delta=4.0, t_max=50, reps=4, seed=1103),
            threads=t),
        "risk": lambda t: simulate.run_risk_experiment(
            simulate.RiskConfig(n_grid=(100,), k_grid=(0, 5), estimators=("median", "min"),
                                reps=8, seed=1104), threads=t),
    }
    ok = True
    for name, runner in runs.items():
        blobs = {csv_bytes(runner(t)) for t in (1, 2, 4)}
        ok &= len(blobs) == 1
    elapsed = time.perf_counter() - start
    _report("11 determinism", ok and elapsed < 120.0, f"{elapsed:.1f}s")
