"""Command-line surface: estimation, outlier selection and experiments.

Exit codes: 0 success, 2 usage or malformed input, 3 numeric or regime
failure (degenerate tuning, nonpositive scale estimate).  All
randomized subcommands are deterministic given their flags and seed;
the ``MINFX_SEED`` environment variable overrides ``--seed`` when set.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import simulate, svgplot
from .cheb_estimators import adaptive_estimate, cheb_estimate, median_estimate, minimum_estimate
from .multiple_testing import clip_pvalues_for_export, posthoc_bound, rescaled_pvalues, select_outliers
from .quantile_estimators import (
    adaptive_quantile_estimate,
    budget_quantile,
    budget_scale_quantile,
    location_scale_estimate,
    quantile_estimate,
)
from .report import write_csv, write_json
from .types import DegenerateRegimeError, DegenerateScaleError, InputError

USAGE_EXIT = 2
NUMERIC_EXIT = 3

_ESTIMATE_METHODS = ("median", "min", "quantile", "cheb", "adaptive-gosc",
                     "adaptive-osc", "unknown-variance")


def _read_numbers(path: str) -> np.ndarray:
    text = sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")
    tokens = text.split()
    if not tokens:
        raise InputError("input contains no numbers")
    try:
        values = [float(t) for t in tokens]
    except ValueError as exc:
        raise InputError(f"malformed numeric input: {exc}") from exc
    return np.asarray(values, dtype=np.float64)


def _read_index_sets(path: str) -> list[np.ndarray]:
    sets = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            sets.append(np.asarray([int(t) for t in line.split()], dtype=np.int64))
        except ValueError as exc:
            raise InputError(f"malformed index set line {line!r}: {exc}") from exc
    return sets


def _resolve_seed(args) -> int:
    env = os.environ.get("MINFX_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError as exc:
            raise InputError(f"MINFX_SEED must be an integer, got {env!r}") from exc
    return int(args.seed)


def _cmd_estimate(args) -> int:
    y = _read_numbers(args.input)
    method = args.method
    out: dict
    if method == "median":
        res = median_estimate(y)
    elif method == "min":
        res = minimum_estimate(y)
    elif method == "quantile":
        if args.q is None:
            raise InputError("--method quantile requires --q")
        res = quantile_estimate(y, args.q)
    elif method == "cheb":
        if args.q is None:
            raise InputError("--method cheb requires --q")
        # caller-supplied degree: run as a research tool at any sample size
        res = cheb_estimate(y, args.q, enforce_regime=False)
    elif method == "adaptive-gosc":
        res = adaptive_estimate(y)
    elif method == "adaptive-osc":
        res = adaptive_quantile_estimate(y, c0=args.c0)
    elif method == "unknown-variance":
        if args.k is None:
            raise InputError("--method unknown-variance requires --k")
        n = y.size
        if not 1 <= args.k <= n - 2:
            raise InputError(f"--k must lie in [1, {n - 2}] for n={n}")
        q = min(budget_quantile(args.k, n), (n + 1) // 2)
        qp = min(budget_scale_quantile(args.k, n), q)
        scaled = location_scale_estimate(y, q, qp)
        out = {
            "method": method,
            "value": scaled.theta,
            "sigma": scaled.sigma,
            "tuning": dict(scaled.tuning, k=args.k),
        }
        print(json.dumps(out))
        return 0
    else:  # pragma: no cover - argparse restricts choices
        raise InputError(f"unknown method {method!r}")
    out = {"method": res.method, "value": res.value, "tuning": dict(res.tuning)}
    print(json.dumps(out))
    return 0


def _cmd_select(args) -> int:
    y = _read_numbers(args.input)
    n = y.size
    if args.k0 is None:
        raise InputError("select requires --k0")
    outcome, rescaling = select_outliers(y, args.alpha, args.k0)
    p = rescaled_pvalues(y, rescaling)
    result = {
        "n": n,
        "alpha": args.alpha,
        "k0": args.k0,
        "rescaling": {"u": rescaling.u, "s": rescaling.s},
        "ell_hat": outcome.ell_hat,
        "t_hat": outcome.t_hat,
        "rejected": [int(i) for i in outcome.rejected],
        "rejected_pvalues": [float(v) for v in
                             clip_pvalues_for_export(p[outcome.rejected])],
    }
    if args.posthoc is not None:
        bounds = []
        for subset in _read_index_sets(args.posthoc):
            if subset.size and (subset.min() < 0 or subset.max() >= n):
                raise InputError("post hoc subset index out of range")
            bounds.append({
                "set_size": int(subset.size),
                "bound": posthoc_bound(p, subset, args.alpha),
            })
        result["posthoc"] = bounds
    print(json.dumps(result))
    return 0


def _experiment_config(args, seed: int):
    if args.experiment in ("fdr", "roc", "posthoc"):
        n = args.n if args.n is not None else {"fdr": 100_000, "roc": 100_000,
                                               "posthoc": 1_000}[args.experiment]
        n1 = args.n1 if args.n1 is not None else round(n * args.n1_frac)
        common = dict(n=n, rho=args.rho, n1=n1, alt_shape=args.alt_shape,
                      k0=args.k0, reps=args.reps, seed=seed)
        if args.experiment == "fdr":
            return simulate.FdrConfig(delta=args.delta if args.delta is not None else 3.0,
                                      alpha=args.alpha, epsilon=args.epsilon, **common)
        if args.experiment == "roc":
            return simulate.RocConfig(delta=args.delta if args.delta is not None else 2.5,
                                      **common)
        return simulate.PosthocConfig(delta=args.delta if args.delta is not None else 4.0,
                                      alpha=args.alpha, t_max=args.t_max, **common)
    n_grid = tuple(int(v) for v in args.n_grid.split(","))
    k_grid = tuple(int(v) for v in args.k_grid.split(","))
    estimators = tuple(args.estimators.split(","))
    return simulate.RiskConfig(n_grid=n_grid, k_grid=k_grid, estimators=estimators,
                               shift=args.shift, reps=args.reps, seed=seed)


def _plot_report(report, out_dir: Path) -> Path:
    if report.experiment == "fdr":
        text = svgplot.fdr_boxplot_svg(report.aggregates, simulate.VARIANTS,
                                       title="rescaled selection")
    elif report.experiment == "roc":
        series = {v: (report.aggregates[v]["alphas"], report.aggregates[v]["tdp_mean"])
                  for v in simulate.VARIANTS}
        text = svgplot.curves_svg(series, xlabel="alpha", ylabel="mean TDP",
                                  title="power vs level")
    elif report.experiment == "posthoc":
        t_max = report.config["t_max"]
        per_variant = {v: [] for v in simulate.VARIANTS}
        by_key: dict = {}
        for rec in report.records:
            by_key.setdefault((rec["variant"], rec["rep"]), [None] * t_max)[rec["t"] - 1] = rec["bound"]
        for (variant, _rep), traj in sorted(by_key.items()):
            per_variant[variant].append(traj)
        text = svgplot.posthoc_svg(per_variant, report.aggregates["true_fdp"], t_max)
    else:
        text = svgplot.risk_svg(report.aggregates["by_estimator"])
    return svgplot.write_svg(text, out_dir / f"{report.experiment}_plot.svg")


def _cmd_simulate(args) -> int:
    seed = _resolve_seed(args)
    cfg = _experiment_config(args, seed)
    runner = {
        "fdr": simulate.run_fdr_experiment,
        "roc": simulate.run_roc_experiment,
        "posthoc": simulate.run_posthoc_experiment,
        "risk": simulate.run_risk_experiment,
    }[args.experiment]
    threads = args.threads if args.threads is not None else (os.cpu_count() or 1)
    report = runner(cfg, threads=threads)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = write_csv(report, out_dir / f"{report.experiment}_records.csv")
    json_path = write_json(report, out_dir / f"{report.experiment}_report.json")
    written = [str(csv_path), str(json_path)]
    if args.plot:
        written.append(str(_plot_report(report, out_dir)))
    print(json.dumps({
        "experiment": report.experiment,
        "seed": report.seed,
        "records": len(report.records),
        "wall_seconds": report.wall_seconds,
        "files": written,
    }))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="minfx",
        description="Minimum-effect estimation under one-sided contamination "
                    "and FDR-controlled outlier selection.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    est = sub.add_parser("estimate", help="estimate the minimum effect from data")
    est.add_argument("input", nargs="?", default="-",
                     help="whitespace-delimited numbers file, or - for stdin")
    est.add_argument("--method", required=True, choices=_ESTIMATE_METHODS)
    est.add_argument("--q", type=int, default=None, help="quantile rank or polynomial degree")
    est.add_argument("--k", type=int, default=None, help="contamination budget")
    est.add_argument("--c0", type=float, default=2.0, help="adaptive comparison constant")
    est.set_defaults(func=_cmd_estimate)

    sel = sub.add_parser("select", help="select outliers with FDR control")
    sel.add_argument("input", nargs="?", default="-")
    sel.add_argument("--alpha", type=float, required=True)
    sel.add_argument("--k0", type=int, default=None, help="upper bound on the outlier count")
    sel.add_argument("--posthoc", default=None, metavar="SETS_FILE",
                     help="file of whitespace-delimited 0-based index sets, one per line")
    sel.set_defaults(func=_cmd_select)

    sim = sub.add_parser("simulate", help="run a Monte Carlo experiment")
    sim.add_argument("--experiment", required=True, choices=("fdr", "roc", "posthoc", "risk"))
    sim.add_argument("--out", default="minfx-out", help="output directory")
    sim.add_argument("--n", type=int, default=None)
    sim.add_argument("--reps", type=int, default=100)
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--alpha", type=float, default=0.2)
    sim.add_argument("--rho", type=float, default=0.3)
    sim.add_argument("--delta", type=float, default=None)
    sim.add_argument("--n1", type=int, default=None)
    sim.add_argument("--n1-frac", type=float, default=0.1, dest="n1_frac")
    sim.add_argument("--k0", type=int, default=None)
    sim.add_argument("--alt-shape", default="constant",
                     choices=("constant", "linear", "uniform"), dest="alt_shape")
    sim.add_argument("--epsilon", type=float, default=0.0,
                     help="level inflation for the estimator-corrected variants")
    sim.add_argument("--t-max", type=int, default=200, dest="t_max")
    sim.add_argument("--threads", type=int, default=None)
    sim.add_argument("--plot", action="store_true")
    sim.add_argument("--n-grid", default="100,1000", dest="n_grid")
    sim.add_argument("--k-grid", default="0,10", dest="k_grid")
    sim.add_argument("--estimators", default="median,min,quantile-budget")
    sim.add_argument("--shift", type=float, default=5.0,
                     help="contamination mean shift for the risk experiment")
    sim.set_defaults(func=_cmd_simulate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE_EXIT if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except InputError as exc:
        print(f"minfx: {exc}", file=sys.stderr)
        return USAGE_EXIT
    except FileNotFoundError as exc:
        print(f"minfx: {exc}", file=sys.stderr)
        return USAGE_EXIT
    except (DegenerateRegimeError, DegenerateScaleError) as exc:
        print(f"minfx: {exc}", file=sys.stderr)
        return NUMERIC_EXIT


if __name__ == "__main__":
    sys.exit(main())
