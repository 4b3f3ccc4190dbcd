"""Numerical certificates for the RDM identities and norm bounds.

Every checker returns a :class:`CertificateReport`. Inequalities are
oriented as ``lhs <= rhs`` and ``margin = rhs - lhs``; identities report
``lhs`` = max deviation, ``rhs`` = 0 and ``margin = -deviation``. In both
cases ``passed`` is ``margin >= -tolerance``.

Operator-level checks (T_n, the anticommutator bound, the trace and
truncated-RDM identities) go through dense full-Fock matrices rather than
the sector Gram assembly in :mod:`fermi_rdm.rdm`, so they test it from an
independent route.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Iterable, Optional

import numpy as np

from .errors import DimensionError
from .fock_basis import embed_in_fock, fock_operators, sector_indices
from .rdm import exchange_matrix, gamma1, gamma2, gamma2_truncated
from .spectral import (
    eig_hermitian,
    entropy_from_eigenvalues,
    hs_norm,
    norms_from_eigenvalues,
)
from .states import SectorVector

SCALAR_TOL = 1e-8
MATRIX_TOL = 1e-10
MAX_CERT_FOCK_MODES = 8
MAX_VECTOR_FOCK_MODES = 10
BACH_CONSTANT = 7.554
SQRT5 = math.sqrt(5.0)


@dataclass
class CertificateReport:
    name: str
    lhs: float
    rhs: float
    margin: float
    passed: bool
    context: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "margin": self.margin,
            "pass": self.passed,
            "context": self.context,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), default=_json_default)


def _json_default(x):
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, np.bool_):
        return bool(x)
    raise TypeError(f"cannot serialize {type(x).__name__}")


def _inequality(name, lhs, rhs, tol, **context) -> CertificateReport:
    lhs, rhs = float(lhs), float(rhs)
    margin = rhs - lhs
    return CertificateReport(name, lhs, rhs, margin, bool(margin >= -tol), {**context, "tolerance": tol})


def _identity(name, deviation, tol, **context) -> CertificateReport:
    dev = float(deviation)
    return CertificateReport(name, dev, 0.0, -dev + 0.0, bool(dev <= tol), {**context, "tolerance": tol})


def _state_context(psi: SectorVector) -> dict:
    return {"M": psi.M, "N": psi.N}


# -- coefficient tensors -------------------------------------------------


@dataclass(eq=False)
class CoefficientTensor4:
    """``A[k, l, m, n] = <(u_k (x) u_l), A (u_m (x) u_n)>``."""

    M: int
    entries: np.ndarray

    def __post_init__(self):
        self.entries = np.asarray(self.entries, dtype=np.complex128)
        if self.entries.shape != (self.M,) * 4:
            raise ValueError(f"expected shape {(self.M,) * 4}, got {self.entries.shape}")
        if not np.all(np.isfinite(self.entries)):
            raise ValueError("tensor entries must be finite")

    @property
    def antisymmetrized(self) -> bool:
        return bool(np.array_equal(self.entries.transpose(1, 0, 2, 3), -self.entries))

    @property
    def hs_norm(self) -> float:
        return float(np.linalg.norm(self.entries))

    def as_matrix(self) -> np.ndarray:
        return self.entries.reshape(self.M * self.M, self.M * self.M)

    @classmethod
    def from_matrix(cls, A: np.ndarray) -> "CoefficientTensor4":
        A = np.asarray(A)
        M = math.isqrt(A.shape[0])
        return cls(M, A.reshape(M, M, M, M))

    @classmethod
    def random(cls, M: int, seed: Optional[int] = None, antisymmetric: bool = False) -> "CoefficientTensor4":
        rng = np.random.default_rng(seed)
        shape = (M,) * 4
        A = cls(M, rng.standard_normal(shape) + 1j * rng.standard_normal(shape))
        return antisymmetrize(A) if antisymmetric else A


def antisymmetrize(A: CoefficientTensor4) -> CoefficientTensor4:
    """Replace ``A[k,l,m,n]`` by ``(A[k,l,m,n] - A[l,k,m,n]) / 2``."""
    diff = A.entries - A.entries.transpose(1, 0, 2, 3)
    # |A - A^swap|^2 <= 4 |A|^2, i.e. the projection never grows the norm
    assert np.sum(np.abs(diff) ** 2) <= 4.0 * np.sum(np.abs(A.entries) ** 2) * (1 + 1e-12) + 1e-300
    return CoefficientTensor4(A.M, 0.5 * diff)


def random_projection(M: int, rank: int, seed: Optional[int] = None) -> np.ndarray:
    """Orthogonal projection onto the span of ``rank`` seeded Gaussian columns."""
    if not 0 <= rank <= M:
        raise ValueError(f"rank must lie in [0, {M}], got {rank}")
    if rank == 0:
        return np.zeros((M, M), dtype=np.complex128)
    rng = np.random.default_rng(seed)
    G = rng.standard_normal((M, rank)) + 1j * rng.standard_normal((M, rank))
    Q, _ = np.linalg.qr(G)
    return Q @ Q.conj().T


# -- full Fock machinery --------------------------------------------------


@lru_cache(maxsize=16)
def _fock(M: int) -> tuple[np.ndarray, np.ndarray]:
    ann, cre = fock_operators(M)
    a, c = np.array(ann), np.array(cre)
    a.flags.writeable = False
    c.flags.writeable = False
    return a, c


def _require_fock(M: int, cap: int) -> None:
    if M > cap:
        raise DimensionError(f"full-Fock certificate capped at M <= {cap}, got M={M}")


def _three_body_lowering(A: CoefficientTensor4) -> np.ndarray:
    """``B[n] = sum_{k,l,m} conj(A[k,l,m,n]) c*_m c_l c_k`` as full-Fock matrices."""
    M = A.M
    ann, cre = _fock(M)
    # X[m, n] = sum_{k,l} conj(A[k,l,m,n]) c_l c_k
    pairs = np.einsum("lij,kjs->klis", ann, ann)
    X = np.einsum("klmn,klis->mnis", A.entries.conj(), pairs)
    return np.einsum("mij,mnjs->nis", cre, X), X


def _sq(X: np.ndarray) -> np.ndarray:
    return X.conj().T @ X


def check_tn_identity(A: CoefficientTensor4, n: int, M: Optional[int] = None) -> CertificateReport:
    M = A.M if M is None else M
    if M != A.M:
        raise ValueError(f"tensor has M={A.M}, got M={M}")
    _require_fock(M, MAX_CERT_FOCK_MODES)
    if not A.antisymmetrized:
        raise ValueError("T_n identity requires A antisymmetric in its first index pair")
    if not 0 <= n < M:
        raise ValueError(f"n={n} outside [0, {M})")
    ann, cre = _fock(M)
    B, X = _three_body_lowering(A)
    Bn = B[n]
    lhs = Bn @ Bn.conj().T + Bn.conj().T @ Bn
    An = A.entries[:, :, :, n]
    rhs = sum(_sq(X[m, n]) for m in range(M))
    Y = np.einsum("klm,lij,mjs->kis", An, cre, ann)
    rhs = rhs + 4.0 * sum(_sq(Y[k]) for k in range(M))
    Z = np.einsum("klm,mis->klis", An, ann)
    rhs = rhs - 2.0 * sum(_sq(Z[k, l]) for k in range(M) for l in range(M))
    dev = float(np.max(np.abs(lhs - rhs), initial=0.0))
    return _identity("tn_identity", dev, MATRIX_TOL, M=M, n=n, A_hs=A.hs_norm)


def anticommutator_sum(A: CoefficientTensor4) -> np.ndarray:
    """``S = sum_n {B_n^dag, B_n}`` on the full Fock space."""
    B, _ = _three_body_lowering(A)
    S = np.zeros(B.shape[1:], dtype=np.complex128)
    for Bn in B:
        S += Bn.conj().T @ Bn + Bn @ Bn.conj().T
    return S


def check_prop4_bound(A: CoefficientTensor4, M: Optional[int] = None, N: int = 0) -> CertificateReport:
    M = A.M if M is None else M
    if M != A.M:
        raise ValueError(f"tensor has M={A.M}, got M={M}")
    _require_fock(M, MAX_CERT_FOCK_MODES)
    if not 0 <= N <= M:
        raise ValueError(f"need 0 <= N <= M, got N={N}")
    S = anticommutator_sum(A)
    idx = sector_indices(M, N)
    w_sector = eig_hermitian(S[np.ix_(idx, idx)]).eigenvalues
    lam = float(w_sector[0])
    bound = 5.0 * N * A.hs_norm**2
    lam_full = float(eig_hermitian(S).eigenvalues[0])
    ratio = lam / bound if bound > 0 else 0.0
    return _inequality(
        "anticommutator_bound", lam, bound, SCALAR_TOL,
        M=M, N=N, A_hs=A.hs_norm, ratio=ratio, lambda_max_full_fock=lam_full,
    )


# -- state certificates ---------------------------------------------------


def check_trace_identities(psi: SectorVector, g1=None, g2=None) -> CertificateReport:
    g1 = gamma1(psi) if g1 is None else g1
    g2 = gamma2(psi) if g2 is None else g2
    N = psi.N
    t1, t2 = np.trace(g1), np.trace(g2)
    dev = max(abs(t1 - N), abs(t2 - N * (N - 1)))
    return _identity(
        "trace_identities", dev, MATRIX_TOL, **_state_context(psi),
        tr_gamma1=float(t1.real), tr_gamma2=float(t2.real),
    )


def check_quadratic_form(psi: SectorVector, Phi: np.ndarray, g2=None) -> CertificateReport:
    """``<Phi, gamma2 Phi>`` against ``|| sum Phi_{k,l} c_l c_k Psi ||^2`` on Fock space.

    ``Phi`` is the ``M*M`` coordinate vector, so ``Phi_{k,l} = conj(Phi[k*M+l])``.
    """
    M = psi.M
    _require_fock(M, MAX_VECTOR_FOCK_MODES)
    g2 = gamma2(psi) if g2 is None else g2
    Phi = np.asarray(Phi, dtype=np.complex128).reshape(M * M)
    quad = np.vdot(Phi, g2 @ Phi)
    ann, _ = _fock(M)
    v = embed_in_fock(psi.amps, M, psi.N)
    ck = ann @ v  # (M, D)
    coeff = Phi.conj().reshape(M, M)
    direct = np.zeros_like(v)
    for k in range(M):
        for l in range(M):
            if coeff[k, l] != 0:
                direct += coeff[k, l] * (ann[l] @ ck[k])
    rhs = float(np.vdot(direct, direct).real)
    scale = max(1.0, abs(rhs))
    dev = abs(quad - rhs) / scale
    return _identity(
        "quadratic_form", dev, MATRIX_TOL, **_state_context(psi),
        quadratic_form=float(quad.real), norm_squared=rhs,
    )


def check_hs_bound(psi: SectorVector, g2=None) -> CertificateReport:
    g2 = gamma2(psi) if g2 is None else g2
    N = psi.N
    hs = hs_norm(g2)
    return _inequality(
        "hs_bound", hs, SQRT5 * N, SCALAR_TOL, **_state_context(psi),
        slater_value=math.sqrt(2 * N * (N - 1)), ratio_over_N=hs / N if N else 0.0,
    )


def tr_g1_one_minus_g1(g1: np.ndarray) -> float:
    return float(np.real(np.trace(g1) - np.vdot(g1, g1)))


def check_truncated_bound(psi: SectorVector, g1=None, g2=None) -> CertificateReport:
    g1 = gamma1(psi) if g1 is None else g1
    g2 = gamma2(psi) if g2 is None else g2
    T = gamma2_truncated(psi, g1, g2)
    fluct = tr_g1_one_minus_g1(g1)
    rhs = math.sqrt(5 * psi.N * max(fluct, 0.0))
    return _inequality(
        "truncated_bound", hs_norm(T), rhs, SCALAR_TOL, **_state_context(psi),
        tr_g1_1mg1=fluct,
    )


def yang_value(M: int, N: int) -> Optional[float]:
    if M % 2 or N % 2 or M == 0:
        return None
    return N * (M - N + 2) / M


def check_op_bounds(psi: SectorVector, g1=None, g2=None) -> CertificateReport:
    """``||gamma1||_op <= 1`` and ``||gamma2||_op <= N``; Yang's value when M, N are even."""
    g1 = gamma1(psi) if g1 is None else g1
    g2 = gamma2(psi) if g2 is None else g2
    M, N = psi.M, psi.N
    op1 = norms_from_eigenvalues(eig_hermitian(g1).eigenvalues).op
    op2 = norms_from_eigenvalues(eig_hermitian(g2).eigenvalues).op
    ctx = {**_state_context(psi), "gamma1_op": op1, "gamma2_op": op2}
    margin_extra = 1.0 - op1
    yv = yang_value(M, N)
    if yv is not None:
        ctx["yang_value"] = yv
        ctx["yang_gap"] = yv - op2
        margin_extra = min(margin_extra, yv - op2)
    rep = _inequality("op_bounds", op2, N, SCALAR_TOL, **ctx)
    rep.margin = min(rep.margin, margin_extra)
    rep.passed = bool(rep.margin >= -SCALAR_TOL)
    return rep


def entropy_lower_bound(N: int) -> float:
    return 2.0 * math.log(N) - math.log(5.0 * (1.0 + (2 * N - 1) / (N - 1) ** 2))


def check_entropy_bound(psi: SectorVector, g2=None) -> CertificateReport:
    N = psi.N
    if N < 2:
        raise ValueError(f"entropy corollary needs N >= 2, got N={N}")
    g2 = gamma2(psi) if g2 is None else g2
    gbar = g2 / (N * (N - 1))
    w = eig_hermitian(gbar).eigenvalues
    S = entropy_from_eigenvalues(w)
    bound = entropy_lower_bound(N)
    jensen = float(-math.log(np.sum(w * w)))
    rep = _inequality(
        "entropy_bound", bound, S, SCALAR_TOL, **_state_context(psi),
        jensen_bound=jensen, jensen_margin=S - jensen,
    )
    rep.margin = min(rep.margin, S - jensen)
    rep.passed = bool(rep.margin >= -SCALAR_TOL)
    return rep


def trace_via_operators(psi: SectorVector, A: CoefficientTensor4) -> complex:
    """``-sum_n <B_n Psi, c_n Psi>`` evaluated with Fock-space vectors."""
    M = psi.M
    _require_fock(M, MAX_VECTOR_FOCK_MODES)
    ann, cre = _fock(M)
    v = embed_in_fock(psi.amps, M, psi.N)
    ck = ann @ v
    w = np.einsum("lij,kj->kli", ann, ck)  # c_l c_k Psi
    u = np.einsum("klmn,kli->mni", A.entries.conj(), w)
    Bv = np.einsum("mij,mnj->ni", cre, u)
    return complex(-np.sum(Bv.conj() * ck))


def check_trace_duality(psi: SectorVector, A: CoefficientTensor4, g2=None) -> CertificateReport:
    if A.M != psi.M:
        raise ValueError(f"tensor has M={A.M}, state has M={psi.M}")
    g2 = gamma2(psi) if g2 is None else g2
    via_matrix = complex(np.sum(A.as_matrix() * g2.T))
    via_ops = trace_via_operators(psi, A)
    scale = max(1.0, abs(via_matrix))
    dev = abs(via_matrix - via_ops) / scale
    lhs = abs(via_matrix)
    rhs = SQRT5 * psi.N * A.hs_norm
    rep = _inequality(
        "trace_duality", lhs, rhs, SCALAR_TOL, **_state_context(psi),
        route_deviation=dev, A_hs=A.hs_norm,
    )
    if dev > MATRIX_TOL:
        rep.margin = min(rep.margin, -dev)
        rep.passed = False
    return rep


def _truncated_identity_sides(v, M, N, ann, cre, g1, phi1, phi2, psi1, psi2) -> tuple[complex, complex]:
    """Both sides of the truncated-RDM identity for one vector 4-tuple."""

    def c(phi):  # antilinear in phi
        return np.einsum("j,jab->ab", phi.conj(), ann)

    def cs(phi):
        return np.einsum("j,jab->ab", phi, cre)

    c_phi1_psi = c(phi1) @ v
    create = cs(psi1) @ (cs(psi2) @ c_phi1_psi)
    term1 = np.vdot(cs(g1 @ phi2) @ v, create)
    lowered = c(phi1) @ (c(phi2 - g1 @ phi2) @ v)
    term2 = np.vdot(c(psi2) @ (c(psi1) @ v), lowered)
    return term1, term2


def check_prop5_identity(
    psi: SectorVector,
    g1=None,
    g2=None,
    n_random: int = 50,
    seed: int = 0,
    basis_max_M: int = 5,
) -> CertificateReport:
    """Truncated 2-RDM against its creation/annihilation representation.

    The right-hand side uses a one-body matrix recomputed from Fock vectors
    and never touches the sector Gram assembly.
    """
    M, N = psi.M, psi.N
    _require_fock(M, MAX_VECTOR_FOCK_MODES)
    g1 = gamma1(psi) if g1 is None else g1
    g2 = gamma2(psi) if g2 is None else g2
    T = gamma2_truncated(psi, g1, g2)
    ann, cre = _fock(M)
    v = embed_in_fock(psi.amps, M, N)
    ck = ann @ v
    g1_fock = ck @ ck.conj().T
    eye = np.eye(M, dtype=np.complex128)
    dev = 0.0
    if M <= basis_max_M:
        # basis tuples, vectorized: phi1=u_k, phi2=u_l, psi1=u_m, psi2=u_n
        a_l = np.einsum("jl,jab,b->la", g1_fock, cre, v)  # c*(g1 u_l) Psi
        q = np.einsum("mab,nbc,kc->mnka", cre, cre, ck)  # c*_m c*_n c_k Psi
        term1 = np.einsum("la,mnka->klmn", a_l.conj(), q)
        cprime = np.einsum("jl,jab,b->la", (eye - g1_fock).conj(), ann, v)  # c((1-g1) u_l) Psi
        low = np.einsum("kab,lb->kla", ann, cprime)
        up = np.einsum("nab,mb->mna", ann, ck)  # c_n c_m Psi
        term2 = np.einsum("mna,kla->klmn", up.conj(), low)
        rhs = (term1 - term2).reshape(M * M, M * M)
        dev = float(np.max(np.abs(T - rhs), initial=0.0))
        mode = "basis"
    else:
        rng = np.random.default_rng(seed)
        for _ in range(n_random):
            vecs = rng.standard_normal((4, M)) + 1j * rng.standard_normal((4, M))
            phi1, phi2, psi1, psi2 = vecs
            lhs = np.vdot(np.kron(phi1, phi2), T @ np.kron(psi1, psi2))
            t1, t2 = _truncated_identity_sides(v, M, N, ann, cre, g1_fock, phi1, phi2, psi1, psi2)
            dev = max(dev, abs(lhs - (t1 - t2)))
        mode = "random"
    return _identity("truncated_rdm_identity", dev, MATRIX_TOL, **_state_context(psi), mode=mode)


def check_bach_bound(psi: SectorVector, X: np.ndarray, g1=None, g2=None) -> CertificateReport:
    M = psi.M
    X = np.asarray(X, dtype=np.complex128)
    if X.shape != (M, M):
        raise ValueError(f"projection must be {M}x{M}")
    proj_dev = max(np.max(np.abs(X @ X - X), initial=0.0), np.max(np.abs(X - X.conj().T), initial=0.0))
    if proj_dev > MATRIX_TOL:
        raise ValueError(f"X is not an orthogonal projection (deviation {proj_dev:.3e})")
    g1 = gamma1(psi) if g1 is None else g1
    g2 = gamma2(psi) if g2 is None else g2
    T = gamma2_truncated(psi, g1, g2)
    quantity = float(np.real(np.trace(np.kron(X, X) @ T)))
    tr_x_g1 = float(np.real(np.trace(X @ g1)))
    fluct = float(np.real(np.trace(X @ (g1 - g1 @ g1))))
    bound = -tr_x_g1 * min(1.0, BACH_CONSTANT * math.sqrt(max(fluct, 0.0)))
    return _inequality(
        "bach_bound", bound, quantity, SCALAR_TOL, **_state_context(psi),
        rank=int(round(float(np.real(np.trace(X))))), tr_X_g1=tr_x_g1, tr_X_g1_1mg1=fluct,
    )


def check_exchange_antisymmetry(psi: SectorVector, g2=None) -> CertificateReport:
    """``Ex gamma2 Ex = gamma2`` and ``gamma2 (1 + Ex) / 2 = 0``."""
    g2 = gamma2(psi) if g2 is None else g2
    ex = exchange_matrix(psi.M)
    dev = max(
        float(np.max(np.abs(ex @ g2 @ ex - g2), initial=0.0)),
        float(np.max(np.abs(g2 @ (np.eye(psi.M**2) + ex) / 2), initial=0.0)),
    )
    return _identity("exchange_antisymmetry", dev, MATRIX_TOL, **_state_context(psi))


def certify_state(
    psi: SectorVector,
    seed: int = 0,
    operator_checks: bool = True,
) -> list[CertificateReport]:
    """Run every applicable certificate on one state.

    ``seed`` drives the auxiliary random objects (test tensors, projections).
    Operator-level checks whose cost grows like ``4**M`` run only when
    ``operator_checks`` is set and ``M`` is within the full-Fock cap.
    """
    M, N = psi.M, psi.N
    g1 = gamma1(psi)
    g2 = gamma2(psi)
    rng = np.random.default_rng(seed)
    reports = [
        check_trace_identities(psi, g1, g2),
        check_exchange_antisymmetry(psi, g2),
        check_hs_bound(psi, g2),
        check_truncated_bound(psi, g1, g2),
        check_op_bounds(psi, g1, g2),
    ]
    if N >= 2:
        reports.append(check_entropy_bound(psi, g2))
    X = random_projection(M, max(1, M // 2) if M else 0, seed=seed)
    reports.append(check_bach_bound(psi, X, g1, g2))
    if M <= MAX_VECTOR_FOCK_MODES:
        Phi = rng.standard_normal(M * M) + 1j * rng.standard_normal(M * M)
        reports.append(check_quadratic_form(psi, Phi, g2))
        reports.append(check_trace_duality(psi, CoefficientTensor4.random(M, seed=seed), g2))
        reports.append(check_prop5_identity(psi, g1, g2, seed=seed))
    if operator_checks and 0 < M <= 6:
        A = CoefficientTensor4.random(M, seed=seed)
        reports.append(check_prop4_bound(A, M, N))
        anti = antisymmetrize(A)
        for n in range(M):
            reports.append(check_tn_identity(anti, n, M))
    for r in reports:
        r.context.setdefault("seed", seed)
    return reports


def all_passed(reports: Iterable[CertificateReport]) -> bool:
    return all(r.passed for r in reports)
