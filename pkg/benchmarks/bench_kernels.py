"""Time the numba kernels against their numpy/Python twins.

    python benchmarks/bench_kernels.py [--repeat 5] [--seed 0]

Each row runs both variants on the same integer matrices, checks that the
outputs agree, and reports the best-of-N wall time. Numba compilation is
done once up front and not counted.
"""
from __future__ import annotations

import argparse
import random
import time

import numpy as np

from finmetric import _accel, kernels


def _metric(rng: random.Random, n: int, values=(1, 2, 2, 3)) -> np.ndarray:
    w = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        for j in range(i + 1, n):
            w[i, j] = w[j, i] = rng.choice(values)
    return kernels._minplus_closure_np(w)


def _best(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def _cases(rng):
    cost = np.array([[0 if i == j else rng.randint(1, 50) for j in range(120)] for i in range(120)], dtype=np.int64)
    cost = np.minimum(cost, cost.T)
    yield "minplus_closure n=120", kernels._minplus_closure_nb, kernels._minplus_closure_np, (cost,), np.array_equal

    A, B = _metric(rng, 5), _metric(rng, 9)
    order = np.arange(5, dtype=np.int64)
    cand = np.ones((5, 9), dtype=np.bool_)

    def same_rows(a, b):
        return sorted(map(tuple, a.tolist())) == sorted(map(tuple, b.tolist()))

    yield "embeddings 5 -> 9", kernels._embeddings_nb, kernels._embeddings_np, (A, B, order, cand, 0), same_rows

    S, T = _metric(rng, 7), _metric(rng, 3)
    yield ("surjections 7 -> 3", kernels._surjections_nb, kernels._surjections_np,
           (S, T, np.arange(7, dtype=np.int64), 0), same_rows)

    X, Y = _metric(rng, 6, (1, 2, 3, 4)), _metric(rng, 6, (1, 2, 3, 4))
    start = int(max(X.max(), Y.max())) + 1

    def same_value(a, b):
        return int(a[0]) == int(b[0])

    yield ("min_distortion 6 x 6", kernels._min_distortion_nb, kernels._min_distortion_np,
           (X, Y, np.arange(6, dtype=np.int64), 0, start), same_value)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    if not _accel.numba_installed:
        raise SystemExit("numba is not installed; nothing to compare")
    rng = random.Random(args.seed)
    print(f"{'kernel':<24}{'numba (ms)':>12}{'numpy (ms)':>12}{'speedup':>10}")
    for name, nb, np_fn, call_args, agree in _cases(rng):
        nb(*call_args)  # compile
        t_nb, out_nb = _best(lambda: nb(*call_args), args.repeat)
        t_np, out_np = _best(lambda: np_fn(*call_args), args.repeat)
        if not agree(out_nb, out_np):
            raise SystemExit(f"{name}: numba and numpy results differ")
        print(f"{name:<24}{t_nb * 1e3:>12.3f}{t_np * 1e3:>12.3f}{t_np / t_nb:>9.1f}x")


if __name__ == "__main__":
    main()
