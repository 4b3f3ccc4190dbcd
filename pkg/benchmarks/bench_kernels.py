"""Time the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import timeit

import numpy as np

from fermi_rdm import _pykernels

try:
    from fermi_rdm import _ckernels
except ImportError:
    _ckernels = None

CASES = [(10, 5), (12, 6), (14, 7), (16, 8)]


def workloads(mod, M, N):
    masks = mod.enumerate_masks(M, N)
    targets, signs = mod.pair_table(masks, M)
    dim_dst = len(mod.enumerate_masks(M, N - 2))
    rng = np.random.default_rng(0)
    psi = rng.standard_normal(len(masks)) + 1j * rng.standard_normal(len(masks))
    V = mod.scatter_pairs(psi, targets, signs, dim_dst)
    return {
        "enumerate": lambda: mod.enumerate_masks(M, N),
        "rank": lambda: mod.rank_masks(masks, M),
        "single_table": lambda: mod.single_op_table(masks, M, False),
        "pair_table": lambda: mod.pair_table(masks, M),
        "scatter": lambda: mod.scatter_pairs(psi, targets, signs, dim_dst),
        "gather": lambda: mod.gather_pairs(V, targets, signs),
    }


def best_of(fn, repeat):
    n, _ = timeit.Timer(fn).autorange()
    return min(timeit.repeat(fn, number=n, repeat=repeat)) / n


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if _ckernels is None:
        print("compiled extension not built; only the fallback is available")
    print(f"{'M':>3} {'N':>3} {'kernel':<13} {'python ms':>11} {'cython ms':>11} {'speedup':>8}")
    for M, N in CASES:
        py = workloads(_pykernels, M, N)
        cy = workloads(_ckernels, M, N) if _ckernels else {}
        for name, fn in py.items():
            t_py = best_of(fn, args.repeat) * 1e3
            if name in cy:
                t_cy = best_of(cy[name], args.repeat) * 1e3
                print(f"{M:>3} {N:>3} {name:<13} {t_py:>11.3f} {t_cy:>11.3f} {t_py / t_cy:>7.1f}x")
            else:
                print(f"{M:>3} {N:>3} {name:<13} {t_py:>11.3f} {'-':>11} {'-':>8}")


if __name__ == "__main__":
    main()
