"""Compare the numba and numpy RREF / matmul kernels over a few finite fields.

    python benchmarks/bench_rref.py [--sizes 8 32 96] [--repeat 5]
"""

import argparse
import time

import numpy as np

from toricsplit import _kernels
from toricsplit.field import GF


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[8, 32, 96])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    if not _kernels.HAVE_NUMBA:
        raise SystemExit("numba is not installed; nothing to compare")
    rng = np.random.default_rng(args.seed)
    print(f"{'field':>8} {'n':>4} {'rref numpy':>12} {'rref numba':>12} {'speedup':>8} {'matmul numpy':>13} {'matmul numba':>13}")
    for p, d in ((2, 1), (3, 2), (7, 1), (2, 4)):
        F = GF(p, d)
        tabs = (F.add_table, F.mul_table, F.neg_table, F.inv_table)
        for n in args.sizes:
            M = rng.integers(0, F.q, size=(n, n + 3))
            B = rng.integers(0, F.q, size=(n + 3, n))
            # Warm up the jit and check both paths agree before timing.
            R1, P1 = _kernels.rref_numpy(M, *tabs)
            R2, P2 = _kernels.rref_numba(M, *tabs)
            assert np.array_equal(R1, R2) and np.array_equal(P1, P2)
            _kernels.matmul_numba(M, B, F.add_table, F.mul_table)
            t_np = best_of(lambda: _kernels.rref_numpy(M, *tabs), args.repeat)
            t_nb = best_of(lambda: _kernels.rref_numba(M, *tabs), args.repeat)
            m_np = best_of(lambda: _kernels.matmul_numpy(M, B, F.add_table, F.mul_table), args.repeat)
            m_nb = best_of(lambda: _kernels.matmul_numba(M, B, F.add_table, F.mul_table), args.repeat)
            print(
                f"GF({p}^{d}) {n:>4} {t_np * 1e3:>10.3f}ms {t_nb * 1e3:>10.3f}ms {t_np / t_nb:>7.1f}x"
                f" {m_np * 1e3:>11.3f}ms {m_nb * 1e3:>11.3f}ms"
            )


if __name__ == "__main__":
    main()
