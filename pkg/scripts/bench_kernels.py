#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-numpy fallback.

Usage: python scripts/bench_kernels.py [--repeats N]
"""

import argparse
import time

import numpy as np

from vsumpipe import _pykernels

try:
    from vsumpipe import _ckernels
except ImportError:
    _ckernels = None


def timeit(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    if _ckernels is None:
        print("compiled kernels not built; showing pure-python timings only")

    rng = np.random.default_rng(0)
    cases = []

    for t in (200, 600):
        x = rng.standard_normal((t, 64))
        gram = x @ x.T
        cases.append((f"kts_scatter T={t}", lambda g=gram: _pykernels.kts_scatter(g),
                      None if _ckernels is None else (lambda g=gram: _ckernels.kts_scatter(g))))
        scatter = _pykernels.kts_scatter(gram)
        for band in (0, 10):
            label = f"kts_dp T={t} band={'none' if band == 0 else band}"
            cases.append((label, lambda s=scatter, b=band, n=t: _pykernels.kts_dp(s, n, b),
                          None if _ckernels is None else (lambda s=scatter, b=band, n=t: _ckernels.kts_dp(s, n, b))))

    values = rng.random(400)
    weights = rng.integers(1, 20, 400)
    cases.append(("knapsack n=400 cap=4000", lambda: _pykernels.knapsack_table(values, weights, 4000),
                  None if _ckernels is None else (lambda: _ckernels.knapsack_table(values, weights, 4000))))

    print(f"{'case':<28} {'pure (ms)':>10} {'compiled (ms)':>14} {'speedup':>8}")
    for label, pure_fn, c_fn in cases:
        pure_ms = timeit(pure_fn, args.repeats) * 1e3
        if c_fn is None:
            print(f"{label:<28} {pure_ms:>10.2f} {'-':>14} {'-':>8}")
        else:
            c_ms = timeit(c_fn, args.repeats) * 1e3
            print(f"{label:<28} {pure_ms:>10.2f} {c_ms:>14.2f} {pure_ms / c_ms:>7.1f}x")


if __name__ == "__main__":
    main()
