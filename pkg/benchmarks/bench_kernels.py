"""Time the compiled kernels against the numpy fallback on identical inputs.

    python3 benchmarks/bench_kernels.py [--repeat 3]
"""

import argparse
import time

import numpy as np

from flatstat import kernels
from flatstat.gf2core import q_binomial
from flatstat.grassmann import basis_array, enumerate_subspaces, flat_masks
from flatstat.search import _incidence


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t)
    return min(times), out


def cases(rng):
    n, d = 10, 3
    ind = rng.integers(0, 2, 1 << n, dtype=np.uint8)
    bases, pm = basis_array(enumerate_subspaces(n, d, 0, min(q_binomial(n, d), 20000)))

    def fold(mod):
        hist = np.zeros((1 << d) + 1, dtype=np.int64)
        mod.fold_histogram(ind, bases, pm, hist)
        return hist

    flats = np.asarray(flat_masks(4, 2), dtype=np.uint64)
    masks = np.arange(1 << 16, dtype=np.uint64)

    def profiles(mod):
        return mod.mask_profiles(masks, flats, 5)

    pts, inc = _incidence(6, 2)
    T = 50_000
    props = rng.integers(0, 64, T, dtype=np.int32)
    unif = rng.random(T)
    temps = 0.999 ** np.arange(T)
    init = rng.integers(0, 2, 64, dtype=np.uint8)

    def anneal(mod):
        st = init.copy()
        counts = st[pts].sum(axis=1, dtype=np.int32)
        return mod.anneal_run(inc, st, counts, 2, props, unif, temps)[0]

    return [
        (f"fold_histogram n={n} d={d} ({bases.shape[0]} subspaces)", fold),
        ("mask_profiles n=4 d=2 (all 65536 sets)", profiles),
        (f"anneal_run n=6 d=2 ({T} steps)", anneal),
    ]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if kernels.compiled_backend is None:
        raise SystemExit("compiled kernels are not built; reinstall without FLATSTAT_NO_EXT")
    rng = np.random.default_rng(7)
    print(f"{'kernel':50s} {'python s':>10s} {'compiled s':>11s} {'speedup':>8s}")
    for name, fn in cases(rng):
        tp, op = best_of(lambda: fn(kernels.python_backend), args.repeat)
        tc, oc = best_of(lambda: fn(kernels.compiled_backend), args.repeat)
        same = np.array_equal(np.asarray(op), np.asarray(oc))
        print(f"{name:50s} {tp:10.4f} {tc:11.4f} {tp / tc:7.1f}x{'' if same else '  MISMATCH'}")


if __name__ == "__main__":
    main()
