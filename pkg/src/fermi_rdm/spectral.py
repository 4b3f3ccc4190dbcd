"""Spectra, norms and von Neumann entropy of Hermitian matrices."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .errors import HermiticityError, TraceNormalizationError
from .rdm import HERMITIAN_TOL, symmetrize

NEG_CLIP = 1e-10
TRACE_TOL = 1e-8


@dataclass(frozen=True)
class Spectrum:
    eigenvalues: np.ndarray  # descending
    eigenvectors: Optional[np.ndarray] = None

    @property
    def dim(self) -> int:
        return int(self.eigenvalues.shape[0])


class Norms(NamedTuple):
    op: float
    hs: float
    tr_abs: float


def eig_hermitian(H: np.ndarray, vectors: bool = False, tol: float = HERMITIAN_TOL) -> Spectrum:
    """Eigenvalues in descending order, via LAPACK on ``(H + H^dag)/2``."""
    Hs = symmetrize(np.asarray(H, dtype=np.complex128), tol)
    if Hs.shape[0] == 0:
        return Spectrum(np.zeros(0), np.zeros((0, 0), dtype=np.complex128) if vectors else None)
    if not vectors:
        return Spectrum(np.linalg.eigvalsh(Hs)[::-1].copy())
    w, v = np.linalg.eigh(Hs)
    w, v = w[::-1].copy(), v[:, ::-1].copy()
    scale = np.linalg.norm(Hs)
    resid = np.linalg.norm(Hs - (v * w) @ v.conj().T)
    if resid > 1e-8 * max(scale, 1e-300) and resid > 1e-300:
        raise HermiticityError(f"eigendecomposition residual {resid:.3e} too large")
    return Spectrum(w, v)


def norms_from_eigenvalues(w: np.ndarray) -> Norms:
    a = np.abs(w)
    return Norms(float(a.max(initial=0.0)), float(np.sqrt(np.sum(w * w))), float(a.sum()))


def norms(H: np.ndarray) -> Norms:
    return norms_from_eigenvalues(eig_hermitian(H).eigenvalues)


def op_norm(H: np.ndarray) -> float:
    return norms(H).op


def hs_norm(H: np.ndarray) -> float:
    """Frobenius norm straight from the entries; no eigensolve."""
    return float(np.linalg.norm(np.asarray(H)))


def entropy_from_eigenvalues(w: np.ndarray) -> float:
    if np.any(w < -NEG_CLIP):
        raise TraceNormalizationError(f"eigenvalue {w.min():.3e} below -{NEG_CLIP}")
    if abs(w.sum() - 1.0) > TRACE_TOL:
        raise TraceNormalizationError(f"trace {w.sum()!r} is not 1")
    p = np.clip(w, 0.0, 1.0)
    p = p[p > 0]
    return float(-np.sum(p * np.log(p))) + 0.0


def entropy(H: np.ndarray) -> float:
    """``-tr(H log H)`` for a trace-one PSD matrix, with ``0 log 0 = 0``."""
    return entropy_from_eigenvalues(eig_hermitian(H).eigenvalues)


def purity_entropy_bound(H: np.ndarray) -> float:
    """Jensen lower bound ``-log tr(H^2)`` on the entropy of a density matrix."""
    return float(-np.log(np.real(np.vdot(H, H))))
