"""Benchmark the prime-field row-reduction kernels: numba jit vs pure numpy.

Run:  python benchmarks/bench_modp.py [--sizes 100,200,400] [--prime 32003]

The jitted kernel is compiled on a warmup call before timing.  Both paths are
checked to agree on every instance, so the table doubles as a consistency
sweep at benchmark scale.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from dimertree import _modp


def time_fn(fn, a, p, repeats):
    best = float("inf")
    for _ in range(repeats):
        x = a.copy()
        t0 = time.perf_counter()
        fn(x, p)
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", default="50,100,200,400")
    ap.add_argument("--prime", type=int, default=32003)
    ap.add_argument("--repeats", type=int, default=3)
    args = ap.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]
    p = args.prime
    rng = np.random.default_rng(2024)

    if not _modp.HAVE_NUMBA:
        print("numba not available; only the numpy fallback will run")
    else:
        warm = rng.integers(0, p, size=(8, 8), dtype=np.int64)
        _modp._rref_numba(warm, p)  # compile outside the timed region

    print(f"prime {p}; best of {args.repeats} runs, square matrices")
    print(f"{'n':>6}  {'numpy (s)':>10}  {'numba (s)':>10}  {'speedup':>8}")
    for n in sizes:
        a = rng.integers(0, p, size=(n, n), dtype=np.int64)
        t_np = time_fn(_modp._rref_numpy, a, p, args.repeats)
        if _modp.HAVE_NUMBA:
            t_nb = time_fn(_modp._rref_numba, a, p, args.repeats)
            r1, piv1 = _modp._rref_numpy(a.copy(), p)
            r2, piv2 = _modp._rref_numba(a.copy(), p)
            assert np.array_equal(r1, r2) and list(piv1) == list(piv2), \
                f"kernel mismatch at n={n}"
            print(f"{n:>6}  {t_np:>10.4f}  {t_nb:>10.4f}  {t_np / t_nb:>8.2f}x")
        else:
            print(f"{n:>6}  {t_np:>10.4f}  {'-':>10}  {'-':>8}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
