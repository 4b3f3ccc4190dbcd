"""Occupation-number basis and Jordan-Wigner signed fermion operators.

Modes are 0-based: mode ``k`` is bit ``k`` of an integer mask. A basis
mask with occupied modes ``p_0 < p_1 < ...`` stands for the state
``c*_{p_0} c*_{p_1} ... |0>``, so ``c_k`` and ``c*_k`` pick up the sign
``(-1)**(number of occupied modes below k)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from math import comb
from typing import Iterable, Optional, Sequence

import numpy as np

from . import _kernels
from .errors import DimensionError

MAX_SECTOR_MODES = 30
MAX_FOCK_MODES = 14
DEFAULT_CAP_DIM = 10**6

Word = Sequence[tuple[bool, int]]


def _check_mode(k: int, M: int) -> None:
    if not 0 <= k < M:
        raise ValueError(f"mode {k} outside [0, {M})")


def parity_below(mask: int, k: int) -> int:
    """Number of occupied modes strictly below ``k``, mod 2."""
    return (mask & ((1 << k) - 1)).bit_count() & 1


@dataclass(frozen=True, eq=False)
class SectorBasis:
    """All masks with ``N`` bits set out of ``M``, in increasing integer order."""

    M: int
    N: int
    masks: np.ndarray = field(repr=False)

    def __len__(self) -> int:
        return int(self.masks.shape[0])

    @property
    def dim(self) -> int:
        return len(self)

    def rank(self, mask: int) -> int:
        if mask < 0 or mask >> self.M or int(mask).bit_count() != self.N:
            raise ValueError(f"mask {mask:#b} not in sector (M={self.M}, N={self.N})")
        return int(_kernels.rank_masks(np.array([mask], dtype=np.int64), self.M)[0])

    def unrank(self, i: int) -> int:
        return int(self.masks[i])

    def ranks(self, masks: np.ndarray) -> np.ndarray:
        return _kernels.rank_masks(np.asarray(masks, dtype=np.int64), self.M)

    @cached_property
    def annihilation_table(self) -> tuple[np.ndarray, np.ndarray]:
        """``(targets, signs)`` of shape ``(M, dim)`` for ``c_k`` into sector ``N-1``."""
        return _kernels.single_op_table(self.masks, self.M, False)

    @cached_property
    def creation_table(self) -> tuple[np.ndarray, np.ndarray]:
        """``(targets, signs)`` of shape ``(M, dim)`` for ``c*_k`` into sector ``N+1``."""
        return _kernels.single_op_table(self.masks, self.M, True)

    @cached_property
    def pair_table(self) -> tuple[np.ndarray, np.ndarray]:
        """``(targets, signs)`` for ``c_l c_k`` with ``k < l``, pairs in lexicographic order."""
        return _kernels.pair_table(self.masks, self.M)


def sector_dim(M: int, N: int) -> int:
    return comb(M, N) if 0 <= N <= M else 0


def enumerate_sector(M: int, N: int, cap_dim: int = DEFAULT_CAP_DIM) -> SectorBasis:
    if not 0 <= M <= MAX_SECTOR_MODES:
        raise DimensionError(f"M={M} outside [0, {MAX_SECTOR_MODES}]")
    if not 0 <= N <= M:
        raise ValueError(f"need 0 <= N <= M, got N={N}, M={M}")
    dim = comb(M, N)
    if dim > cap_dim:
        raise DimensionError(f"sector dimension C({M},{N})={dim} exceeds cap {cap_dim}")
    return _cached_sector(M, N)


@lru_cache(maxsize=256)
def _cached_sector(M: int, N: int) -> SectorBasis:
    masks = _kernels.enumerate_masks(M, N)
    masks.flags.writeable = False
    return SectorBasis(M, N, masks)


def apply_annihilation(k: int, mask: int, M: Optional[int] = None) -> Optional[tuple[int, int]]:
    if M is not None:
        _check_mode(k, M)
    if not (mask >> k) & 1:
        return None
    return (-1 if parity_below(mask, k) else 1), mask & ~(1 << k)


def apply_creation(k: int, mask: int, M: Optional[int] = None) -> Optional[tuple[int, int]]:
    if M is not None:
        _check_mode(k, M)
    if (mask >> k) & 1:
        return None
    return (-1 if parity_below(mask, k) else 1), mask | (1 << k)


def apply_word(word: Word, mask: int) -> Optional[tuple[int, int]]:
    """Act with an operator product on a basis mask, rightmost factor first."""
    sign = 1
    for dagger, k in reversed(list(word)):
        hit = apply_creation(k, mask) if dagger else apply_annihilation(k, mask)
        if hit is None:
            return None
        s, mask = hit
        sign *= s
    return sign, mask


def _word_arrays(word: Word, M: int) -> tuple[np.ndarray, np.ndarray]:
    daggers = np.array([bool(d) for d, _ in word], dtype=np.int8)
    modes = np.array([int(k) for _, k in word], dtype=np.int64)
    for k in modes:
        _check_mode(int(k), M)
    return daggers, modes


def operator_matrix(word: Word, M: int, dtype=np.complex128) -> np.ndarray:
    """Dense ``2**M x 2**M`` matrix of an operator word on the full Fock space.

    ``word`` lists ``(dagger, k)`` factors left to right, so
    ``[(False, 0), (True, 0)]`` is ``c_0 c*_0``.
    """
    if not 0 <= M <= MAX_FOCK_MODES:
        raise DimensionError(f"full Fock space needs M <= {MAX_FOCK_MODES}, got {M}")
    dim = 1 << M
    out = np.zeros((dim, dim), dtype=dtype)
    masks = np.arange(dim, dtype=np.int64)
    if len(word) == 0:
        np.fill_diagonal(out, 1)
        return out
    new, signs = _kernels.word_table(masks, *_word_arrays(word, M))
    live = new >= 0
    out[new[live], masks[live]] = signs[live]
    return out


def fock_operators(M: int, dtype=np.complex128) -> tuple[list[np.ndarray], list[np.ndarray]]:
    """Annihilators ``[c_0, ..., c_{M-1}]`` and creators as dense Fock matrices."""
    ann = [operator_matrix([(False, k)], M, dtype) for k in range(M)]
    cre = [a.conj().T.copy() for a in ann]
    return ann, cre


def sector_indices(M: int, N: int) -> np.ndarray:
    """Full-Fock row indices (= masks) of the N-particle sector, ascending."""
    return _kernels.enumerate_masks(M, N)


def embed_in_fock(amps: np.ndarray, M: int, N: int) -> np.ndarray:
    if M > MAX_FOCK_MODES:
        raise DimensionError(f"full Fock space needs M <= {MAX_FOCK_MODES}, got {M}")
    out = np.zeros(1 << M, dtype=np.complex128)
    out[sector_indices(M, N)] = amps
    return out


def apply_single(table: tuple[np.ndarray, np.ndarray], k: int, amps: np.ndarray, dim_dst: int) -> np.ndarray:
    """Apply the ``k``-th operator of a single-mode table to sector amplitudes."""
    targets, signs = table
    out = np.zeros(dim_dst, dtype=np.complex128)
    live = targets[k] >= 0
    out[targets[k, live]] = signs[k, live] * amps[live]
    return out


def pair_index(k: int, l: int, M: int) -> int:
    """Row-major flattening of ``(k, l)`` into ``h (x) h``."""
    return k * M + l


def unflatten_pair(p: int, M: int) -> tuple[int, int]:
    return divmod(p, M)


def number_in_sector(M: int, N: int) -> np.ndarray:
    """``sum_k c*_k c_k`` restricted to the N-sector, assembled from the tables."""
    basis = enumerate_sector(M, N)
    dim = basis.dim
    out = np.zeros((dim, dim), dtype=np.int64)
    if N == 0:
        return out
    lower = enumerate_sector(M, N - 1)
    ann_t, ann_s = basis.annihilation_table
    cre_t, cre_s = lower.creation_table
    for k in range(M):
        for i in range(dim):
            j = ann_t[k, i]
            if j < 0:
                continue
            out[cre_t[k, j], i] += int(cre_s[k, j]) * int(ann_s[k, i])
    return out


def masks_from_modes(modes: Iterable[int]) -> int:
    mask = 0
    for k in modes:
        mask |= 1 << k
    return mask
