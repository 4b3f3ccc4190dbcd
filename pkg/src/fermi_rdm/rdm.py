"""One- and two-body reduced density matrices of sector states.

Two-body objects live on ``h (x) h`` flattened row-major, ``(k, l) -> k*M + l``.
Entries follow

    gamma1[k, m]          = <c_m Psi, c_k Psi>
    gamma2[(k,l), (m,n)]  = <c_n c_m Psi, c_l c_k Psi>
"""

from __future__ import annotations

import json

import numpy as np

from . import _kernels
from .errors import DimensionError, HermiticityError
from .fock_basis import MAX_FOCK_MODES, enumerate_sector, sector_dim
from .states import SectorVector

HERMITIAN_TOL = 1e-10


def check_hermitian(H: np.ndarray, tol: float = HERMITIAN_TOL) -> float:
    """Return the max entrywise deviation ``|H - H^dag|``, raising above ``tol``."""
    H = np.asarray(H)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise HermiticityError(f"expected a square matrix, got shape {H.shape}")
    if not np.all(np.isfinite(H)):
        raise HermiticityError("matrix has non-finite entries")
    dev = float(np.max(np.abs(H - H.conj().T), initial=0.0))
    if dev > tol * max(1.0, float(np.max(np.abs(H), initial=0.0))):
        raise HermiticityError(f"matrix deviates from Hermitian by {dev:.3e}")
    return dev


def symmetrize(H: np.ndarray, tol: float = HERMITIAN_TOL) -> np.ndarray:
    check_hermitian(H, tol)
    return 0.5 * (H + H.conj().T)


def single_vectors(psi: SectorVector) -> np.ndarray:
    """Rows ``c_k Psi`` for ``k = 0..M-1`` over the (N-1)-sector."""
    M, N = psi.M, psi.N
    if N == 0:
        return np.zeros((M, 0), dtype=np.complex128)
    targets, signs = psi.basis().annihilation_table
    out = np.zeros((M, sector_dim(M, N - 1)), dtype=np.complex128)
    for k in range(M):
        live = targets[k] >= 0
        out[k, targets[k, live]] = signs[k, live] * psi.amps[live]
    return out


def pair_index_arrays(M: int) -> tuple[np.ndarray, np.ndarray]:
    """Flattened indices of ``(k, l)`` and ``(l, k)`` for ``k < l`` in pair-table order."""
    k, l = np.triu_indices(M, 1)
    return k * M + l, l * M + k


def pair_vectors_upper(psi: SectorVector) -> np.ndarray:
    """Rows ``c_l c_k Psi`` for ``k < l`` (lexicographic) over the (N-2)-sector."""
    M, N = psi.M, psi.N
    n_pairs = M * (M - 1) // 2
    if N < 2:
        return np.zeros((n_pairs, 0), dtype=np.complex128)
    targets, signs = psi.basis().pair_table
    return _kernels.scatter_pairs(psi.amps, targets, signs, sector_dim(M, N - 2))


def pair_vectors(psi: SectorVector) -> np.ndarray:
    """All ``M*M`` rows ``c_l c_k Psi``; diagonal pairs vanish, ``(l,k) = -(k,l)``."""
    upper = pair_vectors_upper(psi)
    M = psi.M
    out = np.zeros((M * M, upper.shape[1]), dtype=np.complex128)
    a, b = pair_index_arrays(M)
    out[a] = upper
    out[b] = -upper
    return out


def expand_pair_gram(G: np.ndarray, M: int) -> np.ndarray:
    """Lift a Gram matrix over ``k < l`` pairs to the full ``M^2 x M^2`` matrix."""
    a, b = pair_index_arrays(M)
    out = np.zeros((M * M, M * M), dtype=np.complex128)
    out[np.ix_(a, a)] = G
    out[np.ix_(a, b)] = -G
    out[np.ix_(b, a)] = -G
    out[np.ix_(b, b)] = G
    return out


def gamma1(psi: SectorVector) -> np.ndarray:
    psi.require_normalized()
    W = single_vectors(psi)
    g = W @ W.conj().T
    check_hermitian(g)
    return g


def gamma2(psi: SectorVector) -> np.ndarray:
    psi.require_normalized()
    if psi.M > MAX_FOCK_MODES:
        raise DimensionError(f"two-body matrices need M <= {MAX_FOCK_MODES}, got {psi.M}")
    V = pair_vectors_upper(psi)
    g = expand_pair_gram(V @ V.conj().T, psi.M)
    check_hermitian(g)
    return g


def exchange_matrix(M: int) -> np.ndarray:
    k, l = np.divmod(np.arange(M * M), M)
    ex = np.zeros((M * M, M * M), dtype=np.complex128)
    ex[l * M + k, k * M + l] = 1.0
    return ex


def hartree_fock_part(g1: np.ndarray) -> np.ndarray:
    """``(1 - Ex) (gamma1 (x) gamma1)``."""
    M = g1.shape[0]
    kron = np.kron(g1, g1)
    swapped = kron.reshape(M, M, M * M).transpose(1, 0, 2).reshape(M * M, M * M)
    return kron - swapped


def gamma2_truncated(psi: SectorVector, g1: np.ndarray | None = None, g2: np.ndarray | None = None) -> np.ndarray:
    g1 = gamma1(psi) if g1 is None else g1
    g2 = gamma2(psi) if g2 is None else g2
    t = g2 - hartree_fock_part(g1)
    check_hermitian(t)
    return t


def matrix_to_dict(H: np.ndarray) -> dict:
    H = np.asarray(H)
    flat = H.reshape(-1)
    return {"dim": int(H.shape[0]), "entries": [[float(z.real), float(z.imag)] for z in flat]}


def matrix_to_json(H: np.ndarray) -> str:
    return json.dumps(matrix_to_dict(H))


def matrix_from_dict(d: dict) -> np.ndarray:
    dim = int(d["dim"])
    entries = np.array([complex(re, im) for re, im in d["entries"]], dtype=np.complex128)
    if entries.shape[0] != dim * dim:
        raise ValueError(f"expected {dim * dim} entries, got {entries.shape[0]}")
    return entries.reshape(dim, dim)


def matrix_from_json(s: str) -> np.ndarray:
    return matrix_from_dict(json.loads(s))
