#!/usr/bin/env python3
"""Benchmark the compiled series core against the pure-numpy fallback.

Workloads mirror the package hot paths: tail-kernel style cosine series on
dense grids (quadrature / brute-force oracles) and trig-poly synthesis.

Usage: python benchmarks/bench_series.py [--repeat 5]
"""
import argparse
import time

import numpy as np

from vpsums import _series_numpy

try:
    from vpsums import _series_fast
except ImportError:
    _series_fast = None


def timeit(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    cases = [
        ("series  60 terms x 1e6 grid", "cosine", 60, 1_000_000),
        ("series 300 terms x 16k grid", "cosine", 300, 16_384),
        ("series  50 terms x 1k grid ", "cosine", 50, 1_024),
        ("trigpoly deg 200 x 1e5 grid", "poly", 200, 100_000),
    ]
    print(f"{'workload':<30} {'numpy':>10} {'cython':>10} {'speedup':>9}")
    for label, kind, terms, grid in cases:
        t = rng.uniform(0.0, 2 * np.pi, grid)
        if kind == "cosine":
            coeffs = 0.5 ** np.arange(terms)
            run_np = lambda: _series_numpy.cosine_series(coeffs, 11, 0.3, t)
            run_cy = (lambda: _series_fast.cosine_series(coeffs, 11, 0.3, t)) if _series_fast else None
        else:
            a = rng.normal(size=terms)
            b = rng.normal(size=terms)
            run_np = lambda: _series_numpy.trig_poly_values(0.7, a, b, t)
            run_cy = (lambda: _series_fast.trig_poly_values(0.7, a, b, t)) if _series_fast else None
        t_np = timeit(run_np, args.repeat)
        if run_cy is None:
            print(f"{label:<30} {t_np * 1e3:9.2f}ms {'absent':>10} {'-':>9}")
            continue
        err = np.max(np.abs(run_np() - run_cy()))
        t_cy = timeit(run_cy, args.repeat)
        print(f"{label:<30} {t_np * 1e3:9.2f}ms {t_cy * 1e3:9.2f}ms {t_np / t_cy:8.2f}x"
              f"   (max |diff| {err:.1e})")


if __name__ == "__main__":
    main()
