#!/usr/bin/env python3
"""Benchmark the compiled kernels against their pure-Python twins.

Run:  python benchmarks/bench_kernels.py
"""

import time

import numpy as np

from weightlab import _kernels_py
from weightlab.kernels import BACKEND, _impl


def timeit(fn, *args, repeat=5):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def bench_fe(impl, n=8192, n_xi=50):
    xis = np.linspace(-0.07, 0.17, n_xi)

    def run():
        for xi in xis:
            impl.fe_diag_sequence(-0.5, -0.25, -0.2, complex(xi), n)

    return timeit(run, repeat=3)


def bench_2f1(impl, reps=20):
    def run():
        for _ in range(reps):
            impl.hyp2f1_series(1.3 + 0.2j, 1.1, 2.6, 0.999, 1e-12, 10**6)

    return timeit(run, repeat=3)


def main():
    rows = []
    impls = [("python", _kernels_py)]
    if BACKEND == "cython":
        impls.append(("cython", _impl))
    else:
        print("compiled extension not available; benchmarking the fallback only")
    for name, bench in (("fe_diag_sequence (50 solves, n=8192)", bench_fe),
                        ("hyp2f1_series (20 near-boundary evals)", bench_2f1)):
        times = {label: bench(impl) for label, impl in impls}
        rows.append((name, times))
    print(f"{'kernel':<42} " + " ".join(f"{label:>12}" for label, _ in impls) +
          ("   speedup" if len(impls) == 2 else ""))
    for name, times in rows:
        line = f"{name:<42} " + " ".join(f"{times[label]:>11.4f}s" for label, _ in impls)
        if len(impls) == 2:
            line += f"   {times['python'] / times['cython']:>6.1f}x"
        print(line)


if __name__ == "__main__":
    main()
