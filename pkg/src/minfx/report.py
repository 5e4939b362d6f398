"""Experiment reports and their CSV / JSON serializations.

CSV output is the determinism surface: fixed column order per
experiment, UTF-8, newline line endings, 17-significant-digit floats
(round-trippable), and no volatile fields such as wall-clock time.
The JSON report carries everything, including config echo and timing.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .types import InputError

__all__ = [
    "SCHEMA_VERSION",
    "CSV_COLUMNS",
    "ExperimentReport",
    "boxplot_stats",
    "csv_bytes",
    "write_csv",
    "write_json",
]

SCHEMA_VERSION = 1

CSV_COLUMNS = {
    "fdr": ("rep", "variant", "fdp", "tdp", "ell_hat", "t_hat", "u", "s"),
    "roc": ("rep", "variant", "alpha", "fdp", "tdp", "ell_hat"),
    "posthoc": ("rep", "variant", "t", "bound", "true_fdp"),
    "risk": ("n", "k", "estimator", "reps", "mean_abs_err", "se"),
}


@dataclass
class ExperimentReport:
    experiment: str
    config: dict
    seed: int
    records: list
    aggregates: dict
    wall_seconds: float
    schema: int = SCHEMA_VERSION


def boxplot_stats(values) -> dict:
    """Five-number summary with whiskers at 1.5 IQR past the quartiles."""
    arr = np.asarray(values, dtype=np.float64)
    q1, med, q3 = (float(v) for v in np.percentile(arr, [25, 50, 75]))
    iqr = q3 - q1
    in_lo = arr[arr >= q1 - 1.5 * iqr]
    in_hi = arr[arr <= q3 + 1.5 * iqr]
    return {
        "q1": q1,
        "median": med,
        "q3": q3,
        "whisker_lo": float(in_lo.min()) if in_lo.size else q1,
        "whisker_hi": float(in_hi.max()) if in_hi.size else q3,
        "mean": float(arr.mean()),
    }


def _format_cell(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


def csv_bytes(report: ExperimentReport) -> bytes:
    if report.experiment not in CSV_COLUMNS:
        raise InputError(f"no CSV schema for experiment {report.experiment!r}")
    cols = CSV_COLUMNS[report.experiment]
    lines = [",".join(cols)]
    for rec in report.records:
        lines.append(",".join(_format_cell(rec[c]) for c in cols))
    return ("\n".join(lines) + "\n").encode("utf-8")


def write_csv(report: ExperimentReport, path) -> Path:
    path = Path(path)
    path.write_bytes(csv_bytes(report))
    return path


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj


def write_json(report: ExperimentReport, path) -> Path:
    payload = {
        "schema": report.schema,
        "experiment": report.experiment,
        "seed": report.seed,
        "config": _jsonable(report.config),
        "wall_seconds": report.wall_seconds,
        "aggregates": _jsonable(report.aggregates),
        "records": _jsonable(report.records),
    }
    path = Path(path)
    path.write_text(json.dumps(payload, indent=1), encoding="utf-8")
    return path
