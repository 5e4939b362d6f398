"""Data generators and Monte Carlo experiment drivers.

Determinism contract: every replication r of an experiment draws from a
generator seeded by (master seed, stream tag, r), so reports are
bit-identical for a fixed (config, seed) at any parallelism degree.
Frozen experiment inputs (the uniform alternative means) use their own
stream tag and are drawn once, before the replication loop.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np

from .cheb_estimators import adaptive_estimate, median_estimate, minimum_estimate
from .multiple_testing import bh_procedure, fdp, posthoc_bound, rescaled_pvalues, tdp
from .quantile_estimators import (
    adaptive_quantile_estimate,
    budget_quantile,
    budget_scale_quantile,
    location_scale_estimate,
    quantile_estimate,
    upper_biased_estimate,
    upper_biased_ranks,
)
from .gaussian import upper_tail_inverse
from .report import ExperimentReport, boxplot_stats
from .types import GroundTruth, InputError, Rescaling, require_int

__all__ = [
    "VARIANTS",
    "ROC_ALPHAS",
    "rng_stream",
    "ContaminationSpec",
    "EquiCorrConfig",
    "register_dominating_shift",
    "dominating_shift_names",
    "alternative_means",
    "draw_shifted_gaussian",
    "draw_contaminated",
    "draw_equicorrelated",
    "FdrConfig",
    "RocConfig",
    "PosthocConfig",
    "RiskConfig",
    "run_fdr_experiment",
    "run_roc_experiment",
    "run_posthoc_experiment",
    "run_risk_experiment",
    "RISK_ESTIMATORS",
]

VARIANTS = ("uncorrected", "oracle", "rho_known", "rho_unknown")

ROC_ALPHAS = (0.005, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5)

_MASK64 = (1 << 64) - 1


def rng_stream(seed: int, *key: int) -> np.random.Generator:
    """Independent generator for (seed, key); stable across processes."""
    ss = np.random.SeedSequence(entropy=int(seed) & _MASK64,
                                spawn_key=tuple(int(k) for k in key))
    return np.random.default_rng(ss)


# ---------------------------------------------------------------------------
# contamination model descriptions and generators
# ---------------------------------------------------------------------------

_DOMINATING_SHIFTS: dict[str, Callable] = {}


def register_dominating_shift(name: str, sampler: Callable, probe_params: dict) -> None:
    """Register a nonnegative shift sampler for custom contaminations.

    A contaminated coordinate draws noise xi + D with D from the
    sampler, which dominates the pure Gaussian null whenever D >= 0.
    The sampler is probed at registration and rejected if a draw comes
    back negative.
    """
    probe = np.asarray(sampler(rng_stream(0, 999), 64, **probe_params), dtype=np.float64)
    if probe.shape != (64,) or not np.all(probe >= 0.0):
        raise InputError(f"sampler {name!r} must return nonnegative shifts")
    _DOMINATING_SHIFTS[name] = sampler


def dominating_shift_names() -> tuple[str, ...]:
    return tuple(sorted(_DOMINATING_SHIFTS))


def _point_mass(rng, size, height=1.0):
    h = float(height)
    if h < 0.0:
        raise InputError("point mass height must be >= 0")
    return np.full(size, h)


def _exponential(rng, size, scale=1.0):
    return rng.exponential(float(scale), size)


def _half_normal(rng, size, scale=1.0):
    return np.abs(rng.standard_normal(size)) * float(scale)


register_dominating_shift("point_mass", _point_mass, {"height": 2.0})
register_dominating_shift("exponential", _exponential, {"scale": 1.0})
register_dominating_shift("half_normal", _half_normal, {"scale": 1.0})


@dataclass(frozen=True, eq=False)
class ContaminationSpec:
    """Ground-truth description of a contaminated Gaussian sample.

    ``shifts`` holds the per-index nonnegative mean shifts (zero means
    uncontaminated); ``custom`` lists (index, sampler, params) entries
    whose noise is xi + D with D drawn from the registered sampler, in
    noise units.  An index carries at most one contamination kind.
    """

    theta: float
    sigma: float
    shifts: np.ndarray
    custom: tuple = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "shifts", np.asarray(self.shifts, dtype=np.float64))
        if self.shifts.ndim != 1 or self.shifts.size < 1:
            raise InputError("shifts must be a nonempty 1-d array")
        if not np.all(np.isfinite(self.shifts)) or np.any(self.shifts < 0.0):
            raise InputError("gaussian shifts must be finite and >= 0")
        if not (math.isfinite(self.sigma) and self.sigma > 0.0):
            raise InputError(f"sigma must be > 0, got {self.sigma}")
        if not math.isfinite(self.theta):
            raise InputError("theta must be finite")
        seen = set()
        for idx, name, _params in self.custom:
            i = require_int(idx, "custom index", minimum=0, maximum=self.n - 1)
            if name not in _DOMINATING_SHIFTS:
                raise InputError(f"unknown contamination sampler {name!r}")
            if i in seen or self.shifts[i] > 0.0:
                raise InputError(f"index {i} carries more than one contamination")
            seen.add(i)

    @property
    def n(self) -> int:
        return int(self.shifts.size)

    @property
    def n1(self) -> int:
        return int(np.count_nonzero(self.shifts)) + len(self.custom)

    def truth(self) -> GroundTruth:
        idx = set(np.nonzero(self.shifts > 0.0)[0].tolist())
        idx.update(int(i) for i, _, _ in self.custom)
        return GroundTruth(n=self.n, outliers=np.array(sorted(idx), dtype=np.int64))

    @classmethod
    def gaussian(cls, theta: float, sigma: float, shifts) -> "ContaminationSpec":
        return cls(theta=float(theta), sigma=float(sigma),
                   shifts=np.asarray(shifts, dtype=np.float64))


def draw_shifted_gaussian(spec: ContaminationSpec, rng: np.random.Generator) -> np.ndarray:
    """One sample from the Gaussian-shift model; exactly one normal draw call."""
    if spec.custom:
        raise InputError("spec has custom contaminations; use draw_contaminated")
    xi = rng.standard_normal(spec.n)
    return spec.theta + spec.shifts + spec.sigma * xi


def draw_contaminated(spec: ContaminationSpec, rng: np.random.Generator) -> np.ndarray:
    """One sample allowing registered non-Gaussian dominating contaminations.

    Custom shifts are drawn after the base noise, in ascending index
    order, so a fixed seed fixes the sample."""
    xi = rng.standard_normal(spec.n)
    y = spec.theta + spec.shifts + spec.sigma * xi
    for idx, name, params in sorted(spec.custom, key=lambda e: e[0]):
        shift = float(np.asarray(_DOMINATING_SHIFTS[name](rng, 1, **dict(params)))[0])
        if shift < 0.0:
            raise InputError(f"sampler {name!r} produced a negative shift")
        y[int(idx)] += spec.sigma * shift
    return y


def alternative_means(shape: str, n1: int, delta: float,
                      rng: np.random.Generator | None = None) -> np.ndarray:
    """Outlier mean profiles: constant at delta, linear ramp, or uniform draws.

    The uniform profile must be drawn once per experiment, outside the
    replication loop, so callers pass the dedicated generator here.
    """
    n1 = require_int(n1, "n1", minimum=1)
    delta = float(delta)
    if not delta > 0.0:
        raise InputError(f"delta must be > 0, got {delta}")
    if shape == "constant":
        return np.full(n1, delta)
    if shape == "linear":
        return 0.01 + (2.0 * delta - 0.01) * np.arange(n1) / n1
    if shape == "uniform":
        if rng is None:
            raise InputError("uniform alternative shape needs a generator")
        return rng.uniform(0.01, 2.0 * delta, n1)
    raise InputError(f"unknown alternative shape {shape!r}")


@dataclass(frozen=True, eq=False)
class EquiCorrConfig:
    """Equi-correlated Gaussian model with sparse nonnegative means."""

    n: int
    rho: float
    means: np.ndarray
    alt_shape: str = "constant"
    delta: float = 0.0
    n1: int = 0

    def __post_init__(self) -> None:
        require_int(self.n, "n", minimum=1)
        if not 0.0 <= self.rho < 1.0:
            raise InputError(f"rho must lie in [0, 1), got {self.rho}")
        m = np.asarray(self.means, dtype=np.float64)
        if m.shape != (self.n,) or not np.all(np.isfinite(m)) or np.any(m < 0.0):
            raise InputError("means must be length-n, finite and >= 0")
        object.__setattr__(self, "means", m)
        n1 = int(np.count_nonzero(m))
        object.__setattr__(self, "n1", n1)
        if n1 > 0.9 * self.n:
            raise InputError(f"n1={n1} exceeds 0.9 n; outside the supported pipeline")

    @classmethod
    def build(cls, n: int, rho: float, n1: int, delta: float,
              alt_shape: str = "constant",
              rng: np.random.Generator | None = None) -> "EquiCorrConfig":
        means = np.zeros(n)
        if n1 > 0:
            means[:n1] = alternative_means(alt_shape, n1, delta, rng)
        return cls(n=n, rho=rho, means=means, alt_shape=alt_shape, delta=float(delta))

    def truth(self) -> GroundTruth:
        return GroundTruth(n=self.n, outliers=np.nonzero(self.means > 0.0)[0])


def draw_equicorrelated(cfg: EquiCorrConfig,
                        rng: np.random.Generator) -> tuple[np.ndarray, float, GroundTruth]:
    """One equi-correlated sample plus its shared factor and ground truth.

    Draws the shared factor W first, then the idiosyncratic noise, so
    that conditionally on W the sample matches the Gaussian-shift
    generator run on the same stream state.
    """
    w = float(rng.standard_normal())
    zeta = rng.standard_normal(cfg.n)
    y = cfg.means + math.sqrt(cfg.rho) * w + math.sqrt(1.0 - cfg.rho) * zeta
    return y, w, cfg.truth()


# ---------------------------------------------------------------------------
# replication plumbing
# ---------------------------------------------------------------------------

_WORKER_STATE: dict = {}


def _init_worker(worker, cfg, payload) -> None:
    _WORKER_STATE["worker"] = worker
    _WORKER_STATE["cfg"] = cfg
    _WORKER_STATE["payload"] = payload


def _dispatch(rep: int):
    return _WORKER_STATE["worker"](_WORKER_STATE["cfg"], _WORKER_STATE["payload"], rep)


def _map_replications(worker, cfg, payload, reps: int, threads: int) -> list:
    if threads is None:
        threads = 1
    if threads <= 1 or reps <= 1:
        return [worker(cfg, payload, r) for r in range(reps)]
    workers = min(threads, reps)
    with ProcessPoolExecutor(max_workers=workers, initializer=_init_worker,
                             initargs=(worker, cfg, payload)) as ex:
        chunk = max(1, reps // (workers * 4))
        return list(ex.map(_dispatch, range(reps), chunksize=chunk))


def _variant_rescalings(y: np.ndarray, w: float, rho: float, k0: int) -> dict[str, Rescaling]:
    n = y.size
    sigma = math.sqrt(1.0 - rho)
    q_n, _ = upper_biased_ranks(n)
    y_qn = float(np.partition(y, q_n - 1)[q_n - 1])
    est = upper_biased_estimate(y, k0)
    return {
        "uncorrected": Rescaling(0.0, 1.0),
        "oracle": Rescaling(math.sqrt(rho) * w, sigma),
        "rho_known": Rescaling(y_qn + sigma * upper_tail_inverse(q_n / n), sigma),
        "rho_unknown": Rescaling(est.theta, est.sigma),
    }


def _variant_level(variant: str, alpha: float, epsilon: float) -> float:
    # the power statement inflates the level of the estimator-corrected
    # procedures only; oracle and uncorrected run at the nominal level
    if epsilon > 0.0 and variant in ("rho_known", "rho_unknown"):
        return alpha * (1.0 + epsilon)
    return alpha


# ---------------------------------------------------------------------------
# FDR experiment (boxplot driver)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FdrConfig:
    n: int = 100_000
    rho: float = 0.3
    n1: int = 10_000
    delta: float = 3.0
    alt_shape: str = "constant"
    alpha: float = 0.2
    k0: int | None = None
    reps: int = 100
    seed: int = 0
    epsilon: float = 0.0

    def __post_init__(self) -> None:
        require_int(self.n, "n", minimum=16)
        require_int(self.n1, "n1", minimum=0, maximum=int(0.9 * self.n))
        require_int(self.reps, "reps", minimum=1)
        if not 0.0 <= self.rho < 1.0:
            raise InputError(f"rho must lie in [0, 1), got {self.rho}")
        if not 0.0 < self.alpha < 1.0:
            raise InputError(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.epsilon < 0.0 or self.alpha * (1.0 + self.epsilon) >= 1.0:
            raise InputError("epsilon must be >= 0 with alpha (1 + epsilon) < 1")
        if self.n1 > 0 and not self.delta > 0.0:
            raise InputError("delta must be > 0 when n1 > 0")
        if self.k0 is not None:
            require_int(self.k0, "k0", minimum=self.n1, maximum=int(0.9 * self.n))

    @property
    def resolved_k0(self) -> int:
        return self.n1 if self.k0 is None else self.k0


def _experiment_model(cfg) -> EquiCorrConfig:
    rng = rng_stream(cfg.seed, 1) if cfg.alt_shape == "uniform" else None
    means = np.zeros(cfg.n)
    if cfg.n1 > 0:
        means[: cfg.n1] = alternative_means(cfg.alt_shape, cfg.n1, cfg.delta, rng)
    return EquiCorrConfig(n=cfg.n, rho=cfg.rho, means=means,
                          alt_shape=cfg.alt_shape, delta=cfg.delta)


def _fdr_rep(cfg: FdrConfig, model: EquiCorrConfig, rep: int) -> list[dict]:
    rng = rng_stream(cfg.seed, 0, rep)
    y, w, truth = draw_equicorrelated(model, rng)
    rescalings = _variant_rescalings(y, w, cfg.rho, cfg.resolved_k0)
    records = []
    for variant in VARIANTS:
        r = rescalings[variant]
        level = _variant_level(variant, cfg.alpha, cfg.epsilon)
        sel = bh_procedure(rescaled_pvalues(y, r), level)
        records.append({
            "rep": rep,
            "variant": variant,
            "fdp": fdp(sel, truth),
            "tdp": tdp(sel, truth),
            "ell_hat": sel.ell_hat,
            "t_hat": sel.t_hat,
            "u": r.u,
            "s": r.s,
        })
    return records


def run_fdr_experiment(cfg: FdrConfig, threads: int = 1) -> ExperimentReport:
    """False/true discovery proportions of the four rescaled procedures."""
    start = time.perf_counter()
    model = _experiment_model(cfg)
    per_rep = _map_replications(_fdr_rep, cfg, model, cfg.reps, threads)
    records = [rec for chunk in per_rep for rec in chunk]
    aggregates = {}
    for variant in VARIANTS:
        fdps = np.array([r["fdp"] for r in records if r["variant"] == variant])
        tdps = np.array([r["tdp"] for r in records if r["variant"] == variant])
        aggregates[variant] = {
            "fdr": float(fdps.mean()),
            "fdr_se": float(fdps.std(ddof=1) / math.sqrt(fdps.size)) if fdps.size > 1 else 0.0,
            "tdp_mean": float(tdps.mean()),
            "tdp_se": float(tdps.std(ddof=1) / math.sqrt(tdps.size)) if tdps.size > 1 else 0.0,
            "fdp_box": boxplot_stats(fdps),
            "tdp_box": boxplot_stats(tdps),
        }
    return ExperimentReport(
        experiment="fdr", config=asdict(cfg), seed=cfg.seed, records=records,
        aggregates=aggregates, wall_seconds=time.perf_counter() - start,
    )


# ---------------------------------------------------------------------------
# ROC experiment (power-vs-level driver)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RocConfig:
    n: int = 100_000
    rho: float = 0.3
    n1: int = 10_000
    delta: float = 2.5
    alt_shape: str = "constant"
    alphas: tuple = ROC_ALPHAS
    k0: int | None = None
    reps: int = 100
    seed: int = 0

    def __post_init__(self) -> None:
        require_int(self.n, "n", minimum=16)
        require_int(self.n1, "n1", minimum=0, maximum=int(0.9 * self.n))
        require_int(self.reps, "reps", minimum=1)
        if not 0.0 <= self.rho < 1.0:
            raise InputError(f"rho must lie in [0, 1), got {self.rho}")
        alphas = tuple(float(a) for a in self.alphas)
        if not alphas or not all(0.0 < a < 1.0 for a in alphas):
            raise InputError("alphas must be a nonempty tuple inside (0, 1)")
        object.__setattr__(self, "alphas", alphas)
        if self.k0 is not None:
            require_int(self.k0, "k0", minimum=self.n1, maximum=int(0.9 * self.n))

    @property
    def resolved_k0(self) -> int:
        return self.n1 if self.k0 is None else self.k0


def _bh_at_levels(p: np.ndarray, alphas, h1_mask: np.ndarray) -> list[tuple[int, float, float]]:
    """(ell_hat, fdp, tdp) per level, sharing one sort of the p-values."""
    n = p.size
    order = np.argsort(p, kind="stable")
    p_sorted = p[order]
    h1_prefix = np.concatenate(([0], np.cumsum(h1_mask[order])))
    n1 = int(h1_mask.sum())
    ells = np.arange(1, n + 1)
    out = []
    for alpha in alphas:
        hits = p_sorted <= alpha * ells / n
        ell = int(n - np.argmax(hits[::-1])) if hits.any() else 0
        true_hits = int(h1_prefix[ell])
        rec_fdp = (ell - true_hits) / max(ell, 1)
        rec_tdp = true_hits / max(n1, 1)
        out.append((ell, rec_fdp, rec_tdp))
    return out


def _roc_rep(cfg: RocConfig, model: EquiCorrConfig, rep: int) -> list[dict]:
    rng = rng_stream(cfg.seed, 0, rep)
    y, w, truth = draw_equicorrelated(model, rng)
    h1_mask = truth.outlier_mask()
    rescalings = _variant_rescalings(y, w, cfg.rho, cfg.resolved_k0)
    records = []
    for variant in VARIANTS:
        p = rescaled_pvalues(y, rescalings[variant])
        for alpha, (ell, rec_fdp, rec_tdp) in zip(cfg.alphas,
                                                  _bh_at_levels(p, cfg.alphas, h1_mask)):
            records.append({
                "rep": rep, "variant": variant, "alpha": alpha,
                "fdp": rec_fdp, "tdp": rec_tdp, "ell_hat": ell,
            })
    return records


def run_roc_experiment(cfg: RocConfig, threads: int = 1) -> ExperimentReport:
    """Mean power over a grid of nominal levels, per rescaling variant."""
    start = time.perf_counter()
    model = _experiment_model(cfg)
    per_rep = _map_replications(_roc_rep, cfg, model, cfg.reps, threads)
    records = [rec for chunk in per_rep for rec in chunk]
    aggregates = {}
    for variant in VARIANTS:
        rows = [r for r in records if r["variant"] == variant]
        tdp_mean, fdp_mean = [], []
        for alpha in cfg.alphas:
            sub = [r for r in rows if r["alpha"] == alpha]
            tdp_mean.append(float(np.mean([r["tdp"] for r in sub])))
            fdp_mean.append(float(np.mean([r["fdp"] for r in sub])))
        aggregates[variant] = {
            "alphas": list(cfg.alphas), "tdp_mean": tdp_mean, "fdp_mean": fdp_mean,
        }
    return ExperimentReport(
        experiment="roc", config=asdict(cfg), seed=cfg.seed, records=records,
        aggregates=aggregates, wall_seconds=time.perf_counter() - start,
    )


# ---------------------------------------------------------------------------
# post hoc bound experiment (confidence envelope driver)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PosthocConfig:
    n: int = 1_000
    rho: float = 0.3
    n1: int = 50
    delta: float = 4.0
    alt_shape: str = "constant"
    alpha: float = 0.2
    t_max: int = 200
    k0: int | None = None
    reps: int = 200
    seed: int = 0

    def __post_init__(self) -> None:
        require_int(self.n, "n", minimum=16)
        require_int(self.n1, "n1", minimum=0, maximum=int(0.9 * self.n))
        require_int(self.t_max, "t_max", minimum=1, maximum=self.n)
        require_int(self.reps, "reps", minimum=1)
        if not 0.0 <= self.rho < 1.0:
            raise InputError(f"rho must lie in [0, 1), got {self.rho}")
        if not 0.0 < self.alpha < 1.0:
            raise InputError(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.k0 is not None:
            require_int(self.k0, "k0", minimum=self.n1, maximum=int(0.9 * self.n))

    @property
    def resolved_k0(self) -> int:
        return self.n1 if self.k0 is None else self.k0


def _posthoc_rep(cfg: PosthocConfig, payload, rep: int) -> list[dict]:
    model, sel_order, true_curve = payload
    rng = rng_stream(cfg.seed, 0, rep)
    y, w, _truth = draw_equicorrelated(model, rng)
    rescalings = _variant_rescalings(y, w, cfg.rho, cfg.resolved_k0)
    records = []
    for variant in VARIANTS:
        p = rescaled_pvalues(y, rescalings[variant])
        for t in range(1, cfg.t_max + 1):
            bound = posthoc_bound(p, sel_order[:t], cfg.alpha)
            records.append({
                "rep": rep, "variant": variant, "t": t,
                "bound": bound, "true_fdp": true_curve[t - 1],
            })
    return records


def run_posthoc_experiment(cfg: PosthocConfig, threads: int = 1) -> ExperimentReport:
    """Envelope of post hoc bounds over nested top-t selections.

    Selections take the t largest true means, descending, with ties
    broken by index; for the constant profile this is the first t
    coordinates.  The true false fraction of that selection is
    (t - n1)+ / t.
    """
    start = time.perf_counter()
    model = _experiment_model(cfg)
    sel_order = np.argsort(-model.means, kind="stable")[: cfg.t_max]
    ts = np.arange(1, cfg.t_max + 1)
    true_curve = np.maximum(ts - cfg.n1, 0) / ts
    payload = (model, sel_order, true_curve)
    per_rep = _map_replications(_posthoc_rep, cfg, payload, cfg.reps, threads)
    records = [rec for chunk in per_rep for rec in chunk]
    aggregates = {"true_fdp": [float(v) for v in true_curve]}
    for variant in VARIANTS:
        rows = [r for r in records if r["variant"] == variant]
        by_rep: dict[int, list] = {}
        for r in rows:
            by_rep.setdefault(r["rep"], []).append(r)
        covered = 0
        for chunk in by_rep.values():
            if all(r["true_fdp"] <= r["bound"] for r in chunk):
                covered += 1
        mean_bound = [
            float(np.mean([r["bound"] for r in rows if r["t"] == t]))
            for t in range(1, cfg.t_max + 1)
        ]
        aggregates[variant] = {
            "coverage": covered / max(len(by_rep), 1),
            "mean_bound": mean_bound,
        }
    return ExperimentReport(
        experiment="posthoc", config=asdict(cfg), seed=cfg.seed, records=records,
        aggregates=aggregates, wall_seconds=time.perf_counter() - start,
    )


# ---------------------------------------------------------------------------
# estimation risk experiment
# ---------------------------------------------------------------------------


def _risk_median(y, k):
    return median_estimate(y).value


def _risk_min(y, k):
    return minimum_estimate(y).value


def _risk_budget_quantile(y, k):
    n = y.size
    q = budget_quantile(k, n) if k >= 1 else (n + 1) // 2
    q = min(q, (n + 1) // 2)
    return quantile_estimate(y, q).value


def _risk_scaled_budget(y, k):
    n = y.size
    if k >= 1:
        q = min(budget_quantile(k, n), (n + 1) // 2)
        qp = min(budget_scale_quantile(k, n), q)
    else:
        q, qp = (n + 1) // 2, -(-n // 3)
    return location_scale_estimate(y, q, qp).theta


def _risk_adaptive_osc(y, k):
    return adaptive_quantile_estimate(y).value


def _risk_adaptive_gosc(y, k):
    return adaptive_estimate(y).value


RISK_ESTIMATORS: dict[str, Callable] = {
    "median": _risk_median,
    "min": _risk_min,
    "quantile-budget": _risk_budget_quantile,
    "scaled-budget": _risk_scaled_budget,
    "adaptive-osc": _risk_adaptive_osc,
    "adaptive-gosc": _risk_adaptive_gosc,
}


@dataclass(frozen=True)
class RiskConfig:
    n_grid: tuple = (100, 1_000)
    k_grid: tuple = (0, 10)
    estimators: tuple = ("median", "min", "quantile-budget")
    shift: float = 5.0
    reps: int = 500
    seed: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "n_grid", tuple(int(n) for n in self.n_grid))
        object.__setattr__(self, "k_grid", tuple(int(k) for k in self.k_grid))
        object.__setattr__(self, "estimators", tuple(self.estimators))
        require_int(self.reps, "reps", minimum=2)
        if not self.n_grid or any(n < 4 for n in self.n_grid):
            raise InputError("n_grid entries must be >= 4")
        if any(k < 0 for k in self.k_grid):
            raise InputError("k_grid entries must be >= 0")
        for name in self.estimators:
            if name not in RISK_ESTIMATORS:
                raise InputError(f"unknown estimator {name!r}; "
                                 f"choose from {sorted(RISK_ESTIMATORS)}")
        if not self.shift > 0.0:
            raise InputError("shift must be > 0")


def _risk_rep(cfg: RiskConfig, cell: tuple[int, int], rep: int) -> dict[str, float]:
    n, k = cell
    spec = ContaminationSpec.gaussian(
        theta=0.0, sigma=1.0,
        shifts=np.concatenate([np.full(k, cfg.shift), np.zeros(n - k)]),
    )
    y = draw_shifted_gaussian(spec, rng_stream(cfg.seed, 0, n, k, rep))
    return {name: abs(RISK_ESTIMATORS[name](y, k)) for name in cfg.estimators}


def run_risk_experiment(cfg: RiskConfig, threads: int = 1) -> ExperimentReport:
    """Empirical absolute estimation risk over a (n, k, estimator) grid.

    All estimators in a cell share each replication's sample, so risk
    comparisons within a cell are paired.
    """
    start = time.perf_counter()
    records = []
    for n in cfg.n_grid:
        for k in cfg.k_grid:
            if k > n - 1:
                raise InputError(f"k={k} is not below n={n}")
            errs = _map_replications(_risk_rep, cfg, (n, k), cfg.reps, threads)
            for name in cfg.estimators:
                vals = np.array([e[name] for e in errs])
                records.append({
                    "n": n, "k": k, "estimator": name, "reps": cfg.reps,
                    "mean_abs_err": float(vals.mean()),
                    "se": float(vals.std(ddof=1) / math.sqrt(vals.size)),
                })
    by_est: dict[str, dict] = {}
    for rec in records:
        entry = by_est.setdefault(rec["estimator"], {"n": [], "k": [], "risk": [], "se": []})
        entry["n"].append(rec["n"])
        entry["k"].append(rec["k"])
        entry["risk"].append(rec["mean_abs_err"])
        entry["se"].append(rec["se"])
    return ExperimentReport(
        experiment="risk", config=asdict(cfg), seed=cfg.seed, records=records,
        aggregates={"by_estimator": by_est}, wall_seconds=time.perf_counter() - start,
    )
