import json
import math

import numpy as np
import pytest

from fermi_rdm.certificates import (
    CoefficientTensor4,
    all_passed,
    antisymmetrize,
    anticommutator_sum,
    certify_state,
    check_bach_bound,
    check_entropy_bound,
    check_hs_bound,
    check_op_bounds,
    check_prop4_bound,
    check_prop5_identity,
    check_tn_identity,
    check_trace_duality,
    check_truncated_bound,
    entropy_lower_bound,
    random_projection,
)
from fermi_rdm.errors import DimensionError
from fermi_rdm.rdm import gamma1, gamma2, hartree_fock_part
from fermi_rdm.states import near_slater, random_state, slater, yang_pairing

from oracles import kron_annihilators

# regression baselines from the full pipeline
PAIRING_8_4_HS = 3.4641016151377553
NEAR_SLATER_8_4_T005_SEED3_MARGIN = 0.3156366216804652
ANTICOMM_M4_N2_SEED7_RATIO = 0.044605930152191504


def oracle_lowering(A):
    """``B_n = sum conj(A[k,l,m,n]) c*_m c_l c_k`` from Kronecker operators, by loops."""
    M = A.M
    c = kron_annihilators(M)
    cd = [x.conj().T for x in c]
    B = []
    for n in range(M):
        acc = np.zeros_like(c[0])
        for k in range(M):
            for l in range(M):
                for m in range(M):
                    a = A.entries[k, l, m, n]
                    if a:
                        acc += np.conj(a) * (cd[m] @ c[l] @ c[k])
        B.append(acc)
    return B


# -- tensors --------------------------------------------------------------


def test_antisymmetrize_examples():
    rng = np.random.default_rng(0)
    S = rng.standard_normal((3,) * 4)
    S = S + S.transpose(1, 0, 2, 3)
    assert not np.any(antisymmetrize(CoefficientTensor4(3, S)).entries)
    A = CoefficientTensor4.random(3, seed=2, antisymmetric=True)
    assert np.array_equal(antisymmetrize(A).entries, A.entries)
    R = CoefficientTensor4.random(3, seed=1)
    assert antisymmetrize(R).hs_norm ** 2 <= 4 * R.hs_norm**2


def test_tensor_shape_validation():
    with pytest.raises(ValueError):
        CoefficientTensor4(3, np.zeros((3, 3, 3)))


# -- norm bounds on a state ---------------------------------------------


def test_hs_bound_examples():
    r = check_hs_bound(slater(6, [0, 1, 2]))
    assert r.lhs == pytest.approx(math.sqrt(12), abs=1e-10)
    assert r.rhs == pytest.approx(3 * math.sqrt(5))
    assert r.passed
    assert check_hs_bound(random_state(5, 1, 0)).lhs == 0
    r = check_hs_bound(yang_pairing(8, 4))
    assert r.passed and r.lhs <= 4 * math.sqrt(5)
    assert r.lhs == pytest.approx(PAIRING_8_4_HS, rel=1e-12)


def test_truncated_bound_examples():
    r = check_truncated_bound(slater(7, [0, 3, 5]))
    assert r.passed and r.lhs < 1e-10 and r.rhs < 1e-5
    r = check_truncated_bound(near_slater(8, 4, 0.05, 3))
    assert r.passed and r.margin == pytest.approx(NEAR_SLATER_8_4_T005_SEED3_MARGIN, rel=1e-9)
    assert check_truncated_bound(random_state(6, 3, 1)).passed


def test_op_bounds_examples():
    r = check_op_bounds(yang_pairing(8, 4))
    assert r.lhs == pytest.approx(3, abs=1e-8) and r.context["yang_value"] == 3
    assert abs(r.context["yang_gap"]) < 1e-8 and r.passed
    r = check_op_bounds(yang_pairing(4, 2))
    assert r.lhs == pytest.approx(2, abs=1e-8)
    r = check_op_bounds(slater(6, [0, 1, 2]))
    assert r.lhs == pytest.approx(2, abs=1e-10) and r.passed
    assert "yang_value" not in r.context


def test_entropy_bound_examples():
    r = check_entropy_bound(slater(6, [0, 1, 2]))
    assert r.rhs == pytest.approx(math.log(3), abs=1e-10)
    assert r.lhs == pytest.approx(2 * math.log(3) - math.log(5 * 2.25), abs=1e-12)
    # both forms of the bound reduce to 2 log(N-1) - log 5
    assert r.lhs == pytest.approx(math.log(4 / 5), abs=1e-12) and r.passed
    r = check_entropy_bound(yang_pairing(4, 2))
    assert r.lhs == pytest.approx(math.log(4 / 20), abs=1e-12) and r.passed
    assert check_entropy_bound(random_state(6, 3, 5)).passed
    with pytest.raises(ValueError):
        check_entropy_bound(random_state(4, 1, 0))


def test_entropy_bound_formula():
    assert entropy_lower_bound(2) == pytest.approx(math.log(4) - math.log(20))


# -- operator identities ---------------------------------------------------


def test_tn_zero_tensor():
    r = check_tn_identity(CoefficientTensor4(3, np.zeros((3,) * 4)), 1)
    assert r.passed and r.lhs == 0


def test_tn_single_pair_two_modes():
    E = np.zeros((2,) * 4)
    E[0, 1, 0, 0], E[1, 0, 0, 0] = 1, -1
    A = CoefficientTensor4(2, E)
    assert A.antisymmetrized
    r = check_tn_identity(A, 0)
    assert r.passed and r.lhs < 1e-14


@pytest.mark.parametrize("n", range(4))
def test_tn_random_m4(n):
    A = CoefficientTensor4.random(4, seed=n, antisymmetric=True)
    assert check_tn_identity(A, n).lhs < 1e-10


def test_tn_requires_antisymmetric():
    with pytest.raises(ValueError):
        check_tn_identity(CoefficientTensor4.random(2, seed=0), 0)


@pytest.mark.parametrize("M", [2, 3])
def test_lowering_matches_loop_oracle(M):
    A = CoefficientTensor4.random(M, seed=M)
    S = anticommutator_sum(A)
    B = oracle_lowering(A)
    S_ref = sum(b.conj().T @ b + b @ b.conj().T for b in B)
    assert np.abs(S - S_ref).max() < 1e-12


def test_anticommutator_bound_examples():
    r = check_prop4_bound(CoefficientTensor4(3, np.zeros((3,) * 4)), 3, 2)
    assert r.lhs == 0 and r.passed
    r = check_prop4_bound(CoefficientTensor4.random(4, seed=7), 4, 2)
    assert r.passed
    assert r.context["ratio"] == pytest.approx(ANTICOMM_M4_N2_SEED7_RATIO, rel=1e-9)
    r = check_prop4_bound(CoefficientTensor4.random(4, seed=7), 4, 0)
    assert abs(r.lhs) < 1e-12 and r.passed


def test_anticommutator_bound_cap():
    with pytest.raises(DimensionError):
        check_prop4_bound(CoefficientTensor4.random(9, seed=0), 9, 2)


def test_trace_duality_identity_tensor():
    psi = random_state(4, 3, 2)
    A = CoefficientTensor4.from_matrix(np.eye(16))
    r = check_trace_duality(psi, A)
    assert r.lhs == pytest.approx(6, abs=1e-10) and r.passed
    assert r.rhs == pytest.approx(math.sqrt(5) * 3 * 4)


def test_trace_duality_routes_agree():
    r = check_trace_duality(random_state(5, 2, 0), CoefficientTensor4.random(5, seed=1))
    assert r.passed and r.context["route_deviation"] < 1e-10


def test_trace_duality_saturation():
    psi = random_state(5, 3, 4)
    g2 = gamma2(psi)
    A = CoefficientTensor4.from_matrix(g2 / np.linalg.norm(g2))
    r = check_trace_duality(psi, A, g2)
    assert r.lhs == pytest.approx(np.linalg.norm(g2), rel=1e-12)


def test_truncated_identity_examples():
    r = check_prop5_identity(slater(5, [1, 2, 4]))
    assert r.passed and r.context["mode"] == "basis"
    assert check_prop5_identity(random_state(5, 2, 9)).passed
    assert check_prop5_identity(random_state(4, 1, 3)).passed
    r = check_prop5_identity(random_state(6, 3, 0), n_random=10)
    assert r.passed and r.context["mode"] == "random"


def test_truncated_identity_one_particle_rhs_is_minus_hartree_fock():
    psi = random_state(3, 1, 1)
    g1 = gamma1(psi)
    # with gamma2 = 0 the truncated matrix is -(1-Ex) g1 (x) g1; perturbing it must fail
    r = check_prop5_identity(psi, g1, np.zeros((9, 9)) + 1e-6)
    assert not r.passed
    assert np.abs(hartree_fock_part(g1)).max() > 0


def test_bach_examples():
    psi = random_state(5, 2, 0)
    r = check_bach_bound(psi, np.zeros((5, 5)))
    assert r.lhs == 0 and r.rhs == pytest.approx(0, abs=1e-14) and r.passed
    r = check_bach_bound(slater(5, [0, 1]), np.eye(5))
    assert abs(r.lhs) < 1e-12 and abs(r.rhs) < 1e-10 and r.passed
    assert check_bach_bound(random_state(6, 3, 4), random_projection(6, 2, seed=0)).passed


def test_bach_rejects_non_projection():
    with pytest.raises(ValueError):
        check_bach_bound(random_state(3, 1, 0), np.diag([0.5, 0, 0]))


def test_report_json_keys():
    d = json.loads(check_hs_bound(random_state(4, 2, 0)).to_json())
    assert set(d) == {"name", "lhs", "rhs", "margin", "pass", "context"}


@pytest.mark.parametrize(
    "psi",
    [slater(6, [0, 1, 2]), yang_pairing(6, 2), random_state(6, 3, 1), near_slater(5, 3, 0.1, 2)],
    ids=["slater", "pairing", "random", "near_slater"],
)
def test_certify_state_all_pass(psi):
    reports = certify_state(psi)
    assert all_passed(reports), [r.to_dict() for r in reports if not r.passed]
    names = {r.name for r in reports}
    assert {"hs_bound", "truncated_bound", "op_bounds", "anticommutator_bound", "tn_identity"} <= names
