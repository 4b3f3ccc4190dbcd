import json
import math

import numpy as np
import pytest

from fermi_rdm import extremal
from fermi_rdm.errors import TheoremViolation
from fermi_rdm.extremal import (
    OptimizerConfig,
    gradient,
    maximize,
    objective,
    objective_raw,
    random_unitary,
    sector_rotation,
    tangent_projection,
)
from fermi_rdm.rdm import gamma1
from fermi_rdm.states import SectorVector, random_state, slater, yang_pairing

from oracles import hs_squared_oracle

PAIRING_8_4_OBJECTIVE = 12.000000000000007


def fd_gradient(fun, amps, h=1e-5):
    g = np.zeros_like(amps)
    for i in range(amps.size):
        e = np.zeros_like(amps)
        e[i] = h
        d_re = (fun(amps + e) - fun(amps - e)) / (2 * h)
        d_im = (fun(amps + 1j * e) - fun(amps - 1j * e)) / (2 * h)
        g[i] = d_re + 1j * d_im
    return g


def test_objective_examples():
    assert objective(slater(4, [0, 1])) == pytest.approx(4, abs=1e-12)
    assert objective(random_state(5, 1, 0)) == 0
    assert objective(yang_pairing(8, 4)) == pytest.approx(PAIRING_8_4_OBJECTIVE, rel=1e-12)


@pytest.mark.parametrize("M,N,seed", [(4, 2, 0), (5, 3, 1), (6, 4, 2), (8, 4, 3)])
def test_objective_matches_oracle(M, N, seed):
    psi = random_state(M, N, seed)
    if M <= 6:
        assert objective(psi) == pytest.approx(hs_squared_oracle(psi.amps, M, N), rel=1e-12)
    assert objective(psi) == pytest.approx(np.linalg.norm(_g2(psi)) ** 2, rel=1e-12)


def _g2(psi):
    from fermi_rdm.rdm import gamma2

    return gamma2(psi)


def test_gradient_random_4_2_against_oracle_fd():
    psi = random_state(4, 2, 11)
    g = gradient(psi)
    ref = fd_gradient(lambda a: hs_squared_oracle(a, 4, 2), psi.amps)
    assert np.linalg.norm(g - ref) / np.linalg.norm(ref) < 1e-6


def test_gradient_at_slater_matches_fd():
    psi = slater(5, [0, 2, 3])
    g = gradient(psi)
    ref = fd_gradient(lambda a: objective_raw(a, 5, 3), psi.amps)
    assert np.linalg.norm(g - ref) <= 1e-6 * max(1.0, np.linalg.norm(ref))


def test_unnormalized_objective_rejected():
    with pytest.raises(ValueError):
        objective(SectorVector(4, 2, np.ones(6, dtype=complex)))


def test_tangent_projection_orthogonal():
    psi = random_state(5, 2, 0)
    t = tangent_projection(psi.amps, gradient(psi))
    assert abs(np.real(np.vdot(psi.amps, t))) < 1e-12


def test_maximize_4_2():
    r = maximize(4, 2)
    assert 2 - 1e-6 <= r.best_value <= 2 * math.sqrt(5) + 1e-6
    assert abs(r.best_state.norm - 1) < 1e-12


def test_maximize_8_4_beats_pairing():
    r = maximize(8, 4, OptimizerConfig(restarts=16))
    assert r.best_value >= math.sqrt(objective(yang_pairing(8, 4))) - 1e-9
    assert r.best_value <= math.sqrt(5) * 4 + 1e-6
    assert r.ratio == pytest.approx(r.best_value / 4)
    assert objective(r.best_state) == pytest.approx(r.best_value**2, rel=1e-10)


def test_iterates_stay_unit_norm(monkeypatch):
    norms = []
    orig = extremal._PairOperator.value_and_grad

    def spy(self, amps):
        norms.append(np.linalg.norm(amps))
        return orig(self, amps)

    monkeypatch.setattr(extremal._PairOperator, "value_and_grad", spy)
    maximize(5, 3, OptimizerConfig(restarts=3, max_iters=200))
    assert norms and max(abs(n - 1) for n in norms) < 1e-12


def test_maximize_deterministic():
    cfg = OptimizerConfig(restarts=3, max_iters=300, seed=4)
    assert maximize(6, 3, cfg).to_json() == maximize(6, 3, cfg).to_json()


def test_result_json_fields():
    d = json.loads(maximize(4, 2, OptimizerConfig(restarts=1)).to_json())
    assert {"M", "N", "best_value", "best_value_over_N", "sqrt5_N", "converged", "trajectory", "best_state"} <= set(d)


def test_config_validation():
    with pytest.raises(ValueError):
        OptimizerConfig(step_size=0)
    with pytest.raises(ValueError):
        OptimizerConfig(restarts=-1)


def test_theorem_violation_path(monkeypatch):
    orig = extremal._PairOperator.value_and_grad

    def inflated(self, amps):
        f, g = orig(self, amps)
        return 100.0 * f, 100.0 * g

    monkeypatch.setattr(extremal._PairOperator, "value_and_grad", inflated)
    with pytest.raises(TheoremViolation) as info:
        maximize(4, 2, OptimizerConfig(restarts=1, max_iters=5))
    assert info.value.report.best_value > 2 * math.sqrt(5)


@pytest.mark.parametrize("M,N", [(2, 1), (3, 2), (4, 2), (4, 3)])
def test_rotation_invariance(M, N):
    U = random_unitary(M, seed=M + N)
    R = sector_rotation(U, N)
    assert np.abs(R.conj().T @ R - np.eye(R.shape[0])).max() < 1e-12
    psi = random_state(M, N, seed=1)
    rot = SectorVector(M, N, R @ psi.amps)
    assert np.abs(gamma1(rot) - U @ gamma1(psi) @ U.conj().T).max() < 1e-12
    assert objective(rot) == pytest.approx(objective(psi), rel=1e-12)
