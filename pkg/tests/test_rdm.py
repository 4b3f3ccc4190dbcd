import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fermi_rdm.certificates import check_quadratic_form
from fermi_rdm.errors import HermiticityError, NormalizationError
from fermi_rdm.rdm import (
    exchange_matrix,
    gamma1,
    gamma2,
    gamma2_truncated,
    hartree_fock_part,
    matrix_from_json,
    matrix_to_json,
)
from fermi_rdm.states import SectorVector, near_slater, random_state, slater, yang_pairing

from oracles import gamma1_oracle, gamma2_oracle

SMALL = [(M, N) for M in range(1, 7) for N in range(0, M + 1)]


@pytest.mark.parametrize("M,N", SMALL)
def test_against_kron_oracle(M, N):
    psi = random_state(M, N, seed=100 * M + N)
    assert np.abs(gamma1(psi) - gamma1_oracle(psi.amps, M, N)).max() < 1e-12
    assert np.abs(gamma2(psi) - gamma2_oracle(psi.amps, M, N)).max() < 1e-12


def test_pairing_and_slater_against_oracle():
    for psi in (yang_pairing(6, 4), slater(5, [0, 2, 4]), near_slater(6, 3, 0.2, 7)):
        assert np.abs(gamma2(psi) - gamma2_oracle(psi.amps, psi.M, psi.N)).max() < 1e-12


def test_gamma1_examples():
    assert np.array_equal(gamma1(slater(4, [0, 1])), np.diag([1, 1, 0, 0]).astype(complex))
    assert np.allclose(gamma1(yang_pairing(4, 2)), np.eye(4) / 2, atol=1e-15)


def test_gamma2_slater_2_modes():
    g = gamma2(slater(2, [0, 1]))
    expected = np.zeros((4, 4))
    expected[1, 1] = expected[2, 2] = 1
    expected[1, 2] = expected[2, 1] = -1
    assert np.array_equal(g, expected)
    assert np.linalg.eigvalsh(g).max() == pytest.approx(2, abs=1e-14)


@pytest.mark.parametrize("M,occ", [(3, [1]), (5, [0, 3]), (6, [0, 1, 2]), (8, [1, 2, 5, 7])])
def test_slater_hs_and_factorization(M, occ):
    psi = slater(M, occ)
    N = len(occ)
    g2 = gamma2(psi)
    assert np.linalg.norm(g2) == pytest.approx(np.sqrt(2 * N * (N - 1)), abs=1e-10)
    assert np.abs(gamma2_truncated(psi)).max() < 1e-10


@pytest.mark.parametrize("M", [1, 3, 6])
def test_one_particle(M):
    psi = random_state(M, 1, seed=M)
    g1 = gamma1(psi)
    assert not np.any(gamma2(psi))
    assert np.allclose(gamma2_truncated(psi), -hartree_fock_part(g1), atol=1e-15)


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 7).flatmap(lambda M: st.tuples(st.just(M), st.integers(0, M))), st.integers(0, 10**6))
def test_traces_psd_and_op_bound(MN, seed):
    M, N = MN
    psi = random_state(M, N, seed)
    g1, g2 = gamma1(psi), gamma2(psi)
    assert abs(np.trace(g1) - N) < 1e-10
    assert abs(np.trace(g2) - N * (N - 1)) < 1e-10
    w2 = np.linalg.eigvalsh(g2)
    assert w2.min() >= -1e-10 and w2.max() <= N + 1e-8
    T = gamma2_truncated(psi, g1, g2)
    assert abs(np.trace(T) - (N * (N - 1) - (N * N - np.trace(g1 @ g1)))) < 1e-10


def test_quadratic_form_twenty_tensors():
    rng = np.random.default_rng(20)
    for i in range(20):
        M = int(rng.integers(2, 7))
        N = int(rng.integers(0, M + 1))
        psi = random_state(M, N, seed=i)
        Phi = rng.standard_normal(M * M) + 1j * rng.standard_normal(M * M)
        rep = check_quadratic_form(psi, Phi)
        assert rep.passed, rep.to_dict()


@pytest.mark.parametrize("M", [2, 4, 5])
def test_mixed_exchange_identity(M):
    g1 = gamma1(random_state(M, 2, seed=M))
    eye = np.eye(M)
    ex = exchange_matrix(M)
    lhs = np.kron(eye, g1) @ np.kron(g1, eye) @ (np.eye(M * M) - ex)
    rhs = (np.eye(M * M) - ex) @ np.kron(g1, g1)
    assert np.abs(lhs - rhs).max() < 1e-12
    assert np.abs(hartree_fock_part(g1) - rhs).max() < 1e-14


def test_exchange_examples():
    assert np.array_equal(exchange_matrix(1), [[1]])
    ex2 = exchange_matrix(2)
    assert np.array_equal(np.diag(ex2).real, [1, 0, 0, 1])
    assert ex2[1, 2] == ex2[2, 1] == 1
    ex6 = exchange_matrix(6)
    assert np.array_equal(ex6 @ ex6, np.eye(36))


def test_unnormalized_rejected():
    with pytest.raises(NormalizationError):
        gamma1(SectorVector(3, 1, np.ones(3, dtype=complex)))


def test_matrix_json_round_trip():
    g = gamma2(random_state(4, 2, 3))
    assert matrix_from_json(matrix_to_json(g)).tobytes() == g.tobytes()


def test_hermiticity_guard():
    from fermi_rdm.rdm import check_hermitian

    with pytest.raises(HermiticityError):
        check_hermitian(np.array([[0, 1], [0, 0]]))
