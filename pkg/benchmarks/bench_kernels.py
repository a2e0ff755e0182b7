"""Modular row reduction: numba kernel vs the numpy fallback.

    python benchmarks/bench_kernels.py [--sizes 64,128,256,384] [--repeat 3]

Both paths must give the same echelon form; timings are best-of-repeat after
one warm-up call (which also pays the JIT compile for numba).
"""

import argparse
import time

import numpy as np

from mahler.linalg import _kernels as K

P = 2147483629  # largest prime below 2^31


def best_of(fn, A, repeat):
    fn(A, P)
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn(A, P)
        best = min(best, time.perf_counter() - t)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", default="64,128,256,384")
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    if K.rref_mod_numba is None:
        print("numba unavailable (or MAHLER_DISABLE_NUMBA set); timing numpy only")
    print(f"{'n':>5} {'numpy s':>10} {'numba s':>10} {'speedup':>8}  same")
    for n in (int(s) for s in args.sizes.split(",")):
        # rank-deficient on purpose so pivots are not just the diagonal
        A = rng.integers(0, P, size=(n, n + n // 2), dtype=np.int64)
        A[n // 3] = (A[0] * 3 + A[1]) % P
        t_np = best_of(K.rref_mod_numpy, A, args.repeat)
        if K.rref_mod_numba is None:
            print(f"{n:>5} {t_np:>10.4f} {'-':>10} {'-':>8}  -")
            continue
        t_nb = best_of(K.rref_mod_numba, A, args.repeat)
        R1, p1, r1 = K.rref_mod_numpy(A, P)
        R2, p2, r2 = K.rref_mod_numba(A, P)
        same = r1 == r2 and list(p1) == list(p2) and np.array_equal(R1[:r1], R2[:r2])
        print(f"{n:>5} {t_np:>10.4f} {t_nb:>10.4f} {t_np / t_nb:>8.1f}  {same}")


if __name__ == "__main__":
    main()
