"""Pure numpy implementations of the bitmask kernels.

Every function here has a twin in ``_ckernels.pyx`` with the same
signature and bitwise-identical output. Masks are ``int64`` arrays;
a target of ``-1`` marks an amplitude annihilated by the operator.
"""

from __future__ import annotations

import itertools
from math import comb

import numpy as np


def binomial_table(n_max: int) -> np.ndarray:
    table = np.zeros((n_max + 2, n_max + 2), dtype=np.int64)
    for n in range(n_max + 2):
        for k in range(n + 1):
            table[n, k] = comb(n, k)
    return table


def enumerate_masks(M: int, N: int) -> np.ndarray:
    if N == 0:
        return np.zeros(1, dtype=np.int64)
    masks = np.fromiter(
        (sum(1 << p for p in occ) for occ in itertools.combinations(range(M), N)),
        dtype=np.int64,
        count=comb(M, N),
    )
    masks.sort()
    return masks


def rank_masks(masks: np.ndarray, M: int) -> np.ndarray:
    # colex rank: sum_i C(p_i, i + 1) over ascending occupied positions p_i
    masks = np.asarray(masks, dtype=np.int64)
    table = binomial_table(M)
    rank = np.zeros(masks.shape, dtype=np.int64)
    seen = np.zeros(masks.shape, dtype=np.int64)
    for p in range(M):
        occ = ((masks >> p) & 1).astype(bool)
        seen_occ = seen[occ] + 1
        rank[occ] += table[p, seen_occ]
        seen[occ] = seen_occ
    return rank


def _parity_below(masks: np.ndarray, k: int) -> np.ndarray:
    below = masks & ((1 << k) - 1)
    return np.bitwise_count(below).astype(np.int64) & 1


def single_op_table(masks: np.ndarray, M: int, dagger: bool) -> tuple[np.ndarray, np.ndarray]:
    masks = np.asarray(masks, dtype=np.int64)
    dim = masks.shape[0]
    targets = np.full((M, dim), -1, dtype=np.int64)
    signs = np.zeros((M, dim), dtype=np.int8)
    for k in range(M):
        bit = (masks >> k) & 1
        live = bit == (0 if dagger else 1)
        if not live.any():
            continue
        new = masks[live] ^ (1 << k)
        targets[k, live] = rank_masks(new, M)
        signs[k, live] = 1 - 2 * _parity_below(masks[live], k)
    return targets, signs


def pair_table(masks: np.ndarray, M: int) -> tuple[np.ndarray, np.ndarray]:
    masks = np.asarray(masks, dtype=np.int64)
    dim = masks.shape[0]
    n_pairs = M * (M - 1) // 2
    targets = np.full((n_pairs, dim), -1, dtype=np.int64)
    signs = np.zeros((n_pairs, dim), dtype=np.int8)
    p = 0
    for k in range(M):
        for l in range(k + 1, M):
            both = (1 << k) | (1 << l)
            live = (masks & both) == both
            if live.any():
                src = masks[live]
                # c_k first, then c_l sees one fewer occupied mode below l
                parity = _parity_below(src, k) + _parity_below(src, l) - 1
                targets[p, live] = rank_masks(src ^ both, M)
                signs[p, live] = 1 - 2 * (parity & 1)
            p += 1
    return targets, signs


def word_table(masks: np.ndarray, daggers: np.ndarray, modes: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    cur = np.array(masks, dtype=np.int64, copy=True)
    signs = np.ones(cur.shape, dtype=np.int8)
    alive = np.ones(cur.shape, dtype=bool)
    for dag, k in zip(daggers[::-1], modes[::-1]):
        k = int(k)
        bit = (cur >> k) & 1
        alive &= bit == (0 if dag else 1)
        flip = _parity_below(cur, k).astype(bool)
        signs = np.where(flip, -signs, signs)
        cur = cur ^ (1 << k)
    new_masks = np.where(alive, cur, -1)
    signs = np.where(alive, signs, 0).astype(np.int8)
    return new_masks, signs


def scatter_pairs(psi: np.ndarray, targets: np.ndarray, signs: np.ndarray, dim_dst: int) -> np.ndarray:
    n_pairs, dim_src = targets.shape
    out = np.zeros((n_pairs, dim_dst), dtype=np.complex128)
    rows, cols = np.nonzero(targets >= 0)
    out[rows, targets[rows, cols]] = signs[rows, cols] * psi[cols]
    return out


def gather_pairs(X: np.ndarray, targets: np.ndarray, signs: np.ndarray) -> np.ndarray:
    n_pairs, dim_src = targets.shape
    out = np.zeros(dim_src, dtype=np.complex128)
    rows, cols = np.nonzero(targets >= 0)
    np.add.at(out, cols, signs[rows, cols] * X[rows, targets[rows, cols]])
    return out
