"""Benchmark the pairwise kernels: numba-jitted loops vs the vectorized numpy fallback.

Usage: python benchmarks/bench_pairwise.py [sizes ...]
"""

import sys
import time

import numpy as np

from posori.kernels import _pairwise_mav_numpy, _pairwise_triple_numpy


def make_cloud(n, seed=0):
    rng = np.random.default_rng(seed)
    xs = rng.uniform(-3, 3, (n, 3))
    ns = rng.normal(size=(n, 3))
    ns /= np.linalg.norm(ns, axis=1, keepdims=True)
    return xs, ns


def timeit(fn, *args, repeats=5):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - start)
    return best, result


def main(argv):
    sizes = [int(a) for a in argv[1:]] or [64, 256, 1024]
    w = np.array([1.2, 0.8, 1.4, 0.3, -0.2])

    try:
        from posori import _numba_kernels as jitted
    except ImportError:
        print("numba unavailable; nothing to compare")
        return 1

    # warm up the JIT before timing
    xs, ns = make_cloud(8)
    jitted.pairwise_mav(xs, ns, w)
    jitted.pairwise_triple(xs, ns)

    header = f"{'n':>6} {'kernel':>8} {'numba':>12} {'numpy':>12} {'speedup':>8} {'max diff':>10}"
    print(header)
    print("-" * len(header))
    for n in sizes:
        xs, ns = make_cloud(n)
        t_nb, d_nb = timeit(jitted.pairwise_mav, xs, ns, w)
        t_np, d_np = timeit(_pairwise_mav_numpy, xs, ns, w)
        diff = float(np.max(np.abs(d_nb - d_np)))
        print(f"{n:>6} {'mav':>8} {t_nb * 1e3:>10.2f}ms {t_np * 1e3:>10.2f}ms "
              f"{t_np / t_nb:>7.1f}x {diff:>10.1e}")

        t_nb, d_nb = timeit(jitted.pairwise_triple, xs, ns)
        t_np, d_np = timeit(_pairwise_triple_numpy, xs, ns)
        diff = float(np.max(np.abs(d_nb - d_np)))
        print(f"{n:>6} {'triple':>8} {t_nb * 1e3:>10.2f}ms {t_np * 1e3:>10.2f}ms "
              f"{t_np / t_nb:>7.1f}x {diff:>10.1e}")
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
