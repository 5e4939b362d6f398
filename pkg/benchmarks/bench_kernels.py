"""Benchmark the numba kernels against the numpy/scipy reference path.

Run:  python benchmarks/bench_kernels.py [--n 1000000] [--repeat 7]

Times the hot kernels on a shared random payload and prints one row per
kernel with the best wall time of each backend and the speedup.  If
numba is not installed only the numpy column is reported.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from minfx import _kernels_numpy as knp
from minfx.backend import HAS_NUMBA

if HAS_NUMBA:
    from minfx import _kernels_numba as knb


def best_time(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, default=1_000_000)
    parser.add_argument("--repeat", type=int, default=7)
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    y = rng.standard_normal(args.n)
    p = rng.uniform(1e-12, 1 - 1e-12, args.n)
    p_sorted = np.sort(p)

    cases = {
        "gauss_sf": (lambda m: lambda: m.gauss_sf(y)),
        "gauss_isf": (lambda m: lambda: m.gauss_isf(p)),
        "pvalue_transform": (lambda m: lambda: m.pvalue_transform(y, 0.3, 1.2)),
        "bh_count": (lambda m: lambda: m.bh_count(p_sorted, 0.2)),
        "log_mean_exp_scaled": (lambda m: lambda: m.log_mean_exp_scaled(y, -2.0)),
    }

    if HAS_NUMBA:
        # trigger jit compilation outside the timed region
        for make in cases.values():
            make(knb)()

    header = f"{'kernel':<22}{'numpy [ms]':>12}"
    if HAS_NUMBA:
        header += f"{'numba [ms]':>12}{'speedup':>9}"
    print(f"n = {args.n}")
    print(header)
    for name, make in cases.items():
        t_np = best_time(make(knp), args.repeat)
        row = f"{name:<22}{1e3 * t_np:>12.2f}"
        if HAS_NUMBA:
            t_nb = best_time(make(knb), args.repeat)
            row += f"{1e3 * t_nb:>12.2f}{t_np / t_nb:>8.1f}x"
        print(row)


if __name__ == "__main__":
    main()
