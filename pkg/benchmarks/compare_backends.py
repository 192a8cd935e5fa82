#!/usr/bin/env python3
"""Benchmark the numba kernels against their pure-numpy fallbacks.

Times each kernel twin on representative workloads (degree-500 polynomial
window, K=512 cardinal series, m=1024 stochastic integral) and prints the
per-call times and speedups.  Runs the numpy twins alone when numba is
unavailable or disabled via TRIGZEROS_DISABLE_NUMBA.

Usage: python benchmarks/compare_backends.py [--repeats N]
"""

import argparse
import time

import numpy as np

from trigzeros import _kernels as K


def best_of(fn, args, repeats):
    fn(*args)  # warmup / compile
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeats", type=int, default=7)
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    n = 500
    xi = rng.standard_normal(n)
    eta = rng.standard_normal(n)
    wk = np.arange(1.0, n + 1.0)
    us = np.linspace(0.0, 2.0, 513)

    kcut = 512
    m_signed = rng.standard_normal(2 * kcut + 1)
    ts = np.linspace(-1.0, 3.0, 513)

    m = 1024
    dre = rng.standard_normal(m)
    dim = rng.standard_normal(m)
    u = (np.arange(m) + 0.5) / m

    cases = [
        ("trig_eval_grid (n=500, 513 pts)", "trig_eval_grid",
         (xi, eta, 1.0, 1.0 / n, 1.0, us)),
        ("trig_deriv_grid", "trig_deriv_grid",
         (wk * xi, wk * eta, 1.0, 1.0 / n, 1.0, us)),
        ("cardinal_eval_grid (K=512, 513 pts)", "cardinal_eval_grid", (m_signed, ts)),
        ("cardinal_deriv_grid", "cardinal_deriv_grid", (m_signed, ts)),
        ("levy_eval_grid (m=1024, 513 pts)", "levy_eval_grid", (dre, dim, ts)),
        ("levy_deriv_grid", "levy_deriv_grid", (u * dre, u * dim, ts)),
    ]

    print(f"numba available: {K.HAVE_NUMBA} (active backend: {K.BACKEND})")
    header = f"{'kernel':<38} {'numpy':>10} {'numba':>10} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for label, name, call_args in cases:
        t_np = best_of(getattr(K, name + "_np"), call_args, args.repeats)
        if K.HAVE_NUMBA:
            t_nb = best_of(getattr(K, name + "_nb"), call_args, args.repeats)
            ratio = t_np / t_nb if t_nb > 0 else float("inf")
            print(f"{label:<38} {t_np * 1e3:>8.3f}ms {t_nb * 1e3:>8.3f}ms {ratio:>7.1f}x")
        else:
            print(f"{label:<38} {t_np * 1e3:>8.3f}ms {'-':>10} {'-':>8}")


if __name__ == "__main__":
    main()
