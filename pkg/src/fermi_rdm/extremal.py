"""Projected gradient ascent of ``||gamma2||_HS^2`` on the sector unit sphere.

With ``V`` the matrix of pair vectors ``c_l c_k Psi`` (``k < l``) the
objective is ``f = 4 ||V V^dag||_F^2`` (each pair appears with both
orderings), a homogeneous quartic in the amplitudes. Its real gradient,
packed as ``df/dRe + i df/dIm``, is ``16 L^dag (G V)`` where
``G = V V^dag`` and ``L^dag`` is the pair-creation adjoint of the
scatter that builds ``V``.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from . import _kernels
from .errors import TheoremViolation
from .fock_basis import enumerate_sector, sector_dim
from .states import SectorVector, random_state, slater, yang_pairing

log = logging.getLogger(__name__)

BOUND_SLACK = 1e-6


@dataclass(frozen=True)
class OptimizerConfig:
    max_iters: int = 2000
    step_size: float = 0.1
    tol_grad: float = 1e-8
    restarts: int = 8
    seed: int = 0

    def __post_init__(self):
        if self.step_size <= 0:
            raise ValueError("step_size must be positive")
        if self.tol_grad <= 0:
            raise ValueError("tol_grad must be positive")
        if self.max_iters < 0 or self.restarts < 0:
            raise ValueError("max_iters and restarts must be non-negative")


@dataclass
class ExtremalResult:
    M: int
    N: int
    best_value: float
    best_state: SectorVector
    trajectory: list[tuple[int, float]]
    converged: bool
    start: str = ""
    config: Optional[OptimizerConfig] = None
    runs: list[dict] = field(default_factory=list)

    @property
    def ratio(self) -> float:
        return self.best_value / self.N if self.N else 0.0

    def to_dict(self) -> dict:
        return {
            "M": self.M,
            "N": self.N,
            "best_value": self.best_value,
            "best_value_over_N": self.ratio,
            "sqrt5_N": math.sqrt(5) * self.N,
            "slater_value": math.sqrt(2 * self.N * (self.N - 1)),
            "converged": self.converged,
            "start": self.start,
            "config": asdict(self.config) if self.config else None,
            "runs": self.runs,
            "trajectory": [[int(i), float(v)] for i, v in self.trajectory],
            "best_state": self.best_state.to_dict(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


class _PairOperator:
    """Cached pair table of one sector: ``V = L(psi)`` and its adjoint."""

    def __init__(self, M: int, N: int):
        self.M, self.N = M, N
        self.dim_dst = sector_dim(M, N - 2) if N >= 2 else 0
        self.targets, self.signs = enumerate_sector(M, N).pair_table

    def vectors(self, amps: np.ndarray) -> np.ndarray:
        if self.dim_dst == 0:
            return np.zeros((self.targets.shape[0], 0), dtype=np.complex128)
        return _kernels.scatter_pairs(amps, self.targets, self.signs, self.dim_dst)

    def adjoint(self, X: np.ndarray) -> np.ndarray:
        if self.dim_dst == 0:
            return np.zeros(self.targets.shape[1], dtype=np.complex128)
        return _kernels.gather_pairs(np.ascontiguousarray(X), self.targets, self.signs)

    def value(self, amps: np.ndarray) -> float:
        V = self.vectors(amps)
        G = V @ V.conj().T
        return 4.0 * float(np.real(np.vdot(G, G)))

    def value_and_grad(self, amps: np.ndarray) -> tuple[float, np.ndarray]:
        V = self.vectors(amps)
        G = V @ V.conj().T
        f = 4.0 * float(np.real(np.vdot(G, G)))
        return f, 16.0 * self.adjoint(G @ V)


def objective(psi: SectorVector) -> float:
    """``||gamma2||_HS^2`` of a normalized state."""
    psi.require_normalized()
    return _PairOperator(psi.M, psi.N).value(psi.amps)


def objective_raw(amps: np.ndarray, M: int, N: int) -> float:
    """The quartic extension of :func:`objective` to unnormalized amplitudes."""
    return _PairOperator(M, N).value(np.asarray(amps, dtype=np.complex128))


def gradient(psi: SectorVector) -> np.ndarray:
    """Ambient gradient ``df/dRe + i df/dIm`` of the quartic objective."""
    return _PairOperator(psi.M, psi.N).value_and_grad(psi.amps)[1]


def tangent_projection(amps: np.ndarray, g: np.ndarray) -> np.ndarray:
    # tangent space of the real sphere: remove the Re<psi, g> psi component
    return g - np.real(np.vdot(amps, g)) * amps


def _ascend(op: _PairOperator, amps: np.ndarray, cfg: OptimizerConfig) -> tuple[np.ndarray, float, list, bool]:
    amps = amps / np.linalg.norm(amps)
    f, g = op.value_and_grad(amps)
    traj = [(0, math.sqrt(max(f, 0.0)))]
    converged = False
    for it in range(1, cfg.max_iters + 1):
        pg = tangent_projection(amps, g)
        if np.linalg.norm(pg) < cfg.tol_grad:
            converged = True
            break
        step = cfg.step_size
        while True:
            trial = amps + step * pg
            trial = trial / np.linalg.norm(trial)
            f_trial, g_trial = op.value_and_grad(trial)
            if f_trial >= f or step < 1e-16:
                break
            step *= 0.5
        if f_trial < f:
            # backtracking exhausted: the ascent direction is numerically flat
            converged = bool(np.linalg.norm(pg) < math.sqrt(cfg.tol_grad))
            break
        amps, f, g = trial, f_trial, g_trial
        traj.append((it, math.sqrt(max(f, 0.0))))
    return amps, f, traj, converged


def _starts(M: int, N: int, cfg: OptimizerConfig) -> list[tuple[str, int, np.ndarray]]:
    starts = [("slater", -2, slater(M, range(N)).amps)]
    if M % 2 == 0 and N % 2 == 0:
        starts.append(("pairing", -1, yang_pairing(M, N).amps))
    for r in range(cfg.restarts):
        seed = cfg.seed * 100003 + r
        starts.append((f"random:{seed}", r, random_state(M, N, seed).amps))
    return starts


def maximize(M: int, N: int, cfg: Optional[OptimizerConfig] = None) -> ExtremalResult:
    """Best ``||gamma2||_HS`` over Slater, pairing and random starting points.

    Raises :class:`TheoremViolation` if any run exceeds ``sqrt(5) N``.
    """
    cfg = cfg or OptimizerConfig()
    op = _PairOperator(M, N)
    ceiling = math.sqrt(5.0) * N
    runs = []
    best = None
    for label, order, start in _starts(M, N, cfg):
        amps, f, traj, conv = _ascend(op, start, cfg)
        value = math.sqrt(max(f, 0.0))
        runs.append({"start": label, "value": value, "iters": traj[-1][0], "converged": conv})
        log.debug("start %s: value %.12g after %d iters", label, value, traj[-1][0])
        cand = (value, -order, label, amps, traj, conv)
        if best is None or (cand[0], cand[1]) > (best[0], best[1]):
            best = cand
    value, _, label, amps, traj, conv = best
    result = ExtremalResult(
        M, N, value, SectorVector(M, N, amps), traj, conv, label, cfg, runs,
    )
    if value > ceiling + BOUND_SLACK:
        raise TheoremViolation(
            f"||gamma2||_HS = {value!r} exceeds sqrt(5) N = {ceiling!r} at M={M}, N={N}",
            report=result,
        )
    return result


def sector_rotation(U: np.ndarray, N: int) -> np.ndarray:
    """Matrix of the single-particle unitary ``U`` acting on the N-sector.

    Entry ``(mask', mask)`` is the minor ``det U[occ(mask'), occ(mask)]``.
    """
    M = U.shape[0]
    basis = enumerate_sector(M, N)
    if N == 0:
        return np.ones((1, 1), dtype=np.complex128)
    occ = [[p for p in range(M) if (int(m) >> p) & 1] for m in basis.masks]
    R = np.empty((basis.dim, basis.dim), dtype=np.complex128)
    for j, cols in enumerate(occ):
        for i, rows in enumerate(occ):
            R[i, j] = np.linalg.det(U[np.ix_(rows, cols)])
    return R


def random_unitary(M: int, seed: Optional[int] = None) -> np.ndarray:
    rng = np.random.default_rng(seed)
    Z = rng.standard_normal((M, M)) + 1j * rng.standard_normal((M, M))
    Q, R = np.linalg.qr(Z)
    return Q * (np.diag(R) / np.abs(np.diag(R)))
