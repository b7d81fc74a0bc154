#!/usr/bin/env python3
"""Benchmark the compiled kernel backend against the pure numpy fallback.

Times the four hot kernels on representative workloads and prints a table
with the speedup.  Run from the repository root:

    PYTHONPATH=src python3 benchmarks/benchmark_backends.py [--repeats N]
"""

import argparse
import time

import numpy as np

from egtsim._kernels import have_compiled, pure
from egtsim.games import HawkDoveParams, make_hawk_dove
from egtsim.stochastic import discretize_attrition

HD = make_hawk_dove(HawkDoveParams(2, 4))
ATTRITION = discretize_attrition(2.0, 1.0, bins=21, t_max=10.0)


def workloads():
    x2 = np.array([0.9, 0.1])
    y2 = np.array([0.4, 0.6])
    x21 = np.full(21, 1 / 21)
    return [
        ("rk4_replicator 2x2, 50k steps",
         "rk4_replicator", (HD.a, x2, 0.01, 50000, 100, True)),
        ("rk4_replicator 21x21, 20k steps",
         "rk4_replicator", (ATTRITION.a, x21, 0.01, 20000, 100, True)),
        ("rk4_bimatrix 2x2, 50k steps",
         "rk4_bimatrix", (HD.a, HD.b, x2, y2, 0.01, 50000, 100, True)),
        ("moran_trials n=10 w=1, 100k trials",
         "moran_trials", (2.0, 2.0, 1.0, 1.0, 10, 1.0, 1, 1000000, 100000, 42, 0)),
        ("contest_trials exp vs pure, 200k",
         "contest_trials", (1, 0.5, 0, 1.0, 2.0, 1.0, 1.0, 200000, 7, 0)),
    ]


def best_of(fn, args, repeats):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - start)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=3, help="best-of-N timing (default 3)")
    args = parser.parse_args()

    if not have_compiled():
        print("compiled backend not built; run `python3 setup.py build_ext --inplace` first")
        return 1
    from egtsim._kernels import _core as compiled

    name_w = max(len(name) for name, _, _ in workloads())
    print(f"{'workload':<{name_w}}  {'pure':>10}  {'compiled':>10}  {'speedup':>8}")
    print("-" * (name_w + 34))
    for name, fn_name, fn_args in workloads():
        t_pure = best_of(getattr(pure, fn_name), fn_args, args.repeats)
        t_comp = best_of(getattr(compiled, fn_name), fn_args, args.repeats)
        print(f"{name:<{name_w}}  {t_pure * 1e3:>8.1f}ms  {t_comp * 1e3:>8.1f}ms  "
              f"{t_pure / t_comp:>7.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
