"""Compare the numba-jitted and pure-numpy backends.

Runs the same workloads through both kernel implementations — raw
function/gradient evaluation and full local optimizations — and prints a
timing table.  Invoke from the repository root:

    python3 benchmarks/bench_backends.py [--repeats N]
"""

import argparse
import time

import numpy as np

from evopool.functions import (
    FID_ACKLEY,
    FID_ACKLEY_DECOUPLED,
    FID_LUNACEK,
    FID_RASTRIGIN,
    FID_SCHWEFEL,
    LunacekParams,
    _kernels_numba,
    _kernels_numpy,
    lookup_function,
)
from evopool.localopt import LocalOptSettings, minimize
from evopool._localopt_numba import minimize_kernel

_EMPTY = np.empty(0)
_EMPTY2 = np.empty((0, 0))


def _time(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_kernels(repeats):
    rng = np.random.default_rng(0)
    cases = [
        ("ackley", FID_ACKLEY, 1000, _EMPTY),
        ("ackley-decoupled", FID_ACKLEY_DECOUPLED, 1000, _EMPTY),
        ("rastrigin", FID_RASTRIGIN, 1000, _EMPTY),
        ("schwefel", FID_SCHWEFEL, 1000, _EMPTY),
        ("lunacek", FID_LUNACEK, 1000, LunacekParams().as_array()),
    ]
    rows = []
    for name, fid, dim, fp in cases:
        x = rng.uniform(-5.0, 5.0, dim)
        g = np.empty(dim)
        loops = 200

        def run_numpy():
            for _ in range(loops):
                _kernels_numpy.value_and_grad(fid, x, fp, _EMPTY, _EMPTY, _EMPTY2, g)

        def run_numba():
            for _ in range(loops):
                _kernels_numba.value_and_grad(fid, x, fp, _EMPTY, _EMPTY, _EMPTY2, g)

        run_numba()  # warm up JIT compilation outside the timed region
        t_np = _time(run_numpy, repeats) / loops
        t_nb = _time(run_numba, repeats) / loops
        rows.append((f"{name} n={dim} grad", t_np, t_nb))
    return rows


def bench_localopt(repeats):
    rng = np.random.default_rng(1)
    rows = []
    for name, dim in (("ackley-simplified-grad", 1000), ("rastrigin", 200)):
        spec = lookup_function(name, dim)
        x0 = spec.sample_uniform(rng)
        s = LocalOptSettings()

        def run_python():
            minimize(spec.opt_value_and_grad, x0, s,
                     orthant_at_zero=spec.orthant_at_zero)

        def run_jitted():
            minimize_kernel(
                spec.fid_opt, spec.fp, spec.gw, spec.gz, spec.gc, x0,
                s.memory_pairs, s.fitness_tol, s.gradient_tol,
                s.max_iterations, s.sufficient_decrease, s.curvature,
                spec.orthant_at_zero,
            )

        run_jitted()  # warm-up
        t_py = _time(run_python, repeats)
        t_nb = _time(run_jitted, repeats)
        rows.append((f"minimize {name} n={dim}", t_py, t_nb))
    return rows


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=3,
                        help="timing repetitions (best-of)")
    args = parser.parse_args()

    rows = bench_kernels(args.repeats) + bench_localopt(args.repeats)
    width = max(len(r[0]) for r in rows)
    print(f"{'workload':<{width}}  {'numpy':>12}  {'numba':>12}  {'speedup':>8}")
    for name, t_np, t_nb in rows:
        print(
            f"{name:<{width}}  {t_np * 1e6:>10.1f}us  {t_nb * 1e6:>10.1f}us"
            f"  {t_np / t_nb:>7.1f}x"
        )


if __name__ == "__main__":
    main()
