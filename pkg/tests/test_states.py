import numpy as np
import pytest
from numpy.testing import assert_allclose

from telecert.benchmarks import ppt_min_eigenvalue
from telecert.linalg import hermitian_eigenvalues, projector
from telecert.states import KET0, KET1, KET11, SINGLET, channel_state_ideal, input_states, pauli


def test_channel_state_limits():
    assert_allclose(channel_state_ideal(1.0).matrix, projector(SINGLET))
    assert_allclose(channel_state_ideal(1.0).matrix[1:3, 1:3], [[0.5, -0.5], [-0.5, 0.5]])
    assert_allclose(channel_state_ideal(0.0).matrix, projector(KET11))


def test_channel_state_half():
    expected = np.diag([0, 0.25, 0.25, 0.5]).astype(complex)
    expected[1, 2] = expected[2, 1] = -0.25
    assert_allclose(channel_state_ideal(0.5).matrix, expected, atol=1e-16)


@pytest.mark.parametrize("gamma", [-0.1, 1.1])
def test_channel_state_range(gamma):
    with pytest.raises(ValueError):
        channel_state_ideal(gamma)


def test_channel_state_valid_for_random_gamma():
    for g in np.random.default_rng(2).uniform(0, 1, 1000):
        rho = channel_state_ideal(g)
        assert abs(np.trace(rho.matrix) - 1) < 1e-12
        assert hermitian_eigenvalues(rho.matrix)[0] > -1e-12


def test_singlet_orthogonal_to_11():
    assert np.vdot(SINGLET, KET11) == 0


def test_channel_state_entangled_for_positive_gamma():
    for g in np.concatenate([[1e-3], np.linspace(0.01, 1, 100)]):
        assert ppt_min_eigenvalue(channel_state_ideal(g)) < 0


def test_pauli_action():
    assert_allclose(pauli("z") @ KET0, KET0)
    assert_allclose(pauli("x") @ KET0, KET1)
    assert_allclose(hermitian_eigenvalues(pauli("y")), [-1, 1], atol=1e-15)
    for axis in "xyz":
        s = pauli(axis)
        assert_allclose(s @ s, np.eye(2))
        assert np.trace(s) == 0
    with pytest.raises(ValueError):
        pauli("w")


def test_input_states_order_and_eigenvectors():
    states = input_states()
    assert len(states) == 6
    assert_allclose(states[0].amplitudes, np.array([1, 1]) / np.sqrt(2))
    assert_allclose(states[4].amplitudes, KET0)
    assert_allclose(states[5].amplitudes, KET1)
    for s in states:
        assert abs(np.linalg.norm(s.amplitudes) - 1) < 1e-12
        assert_allclose(pauli(s.axis) @ s.amplitudes, s.eigenvalue * s.amplitudes, atol=1e-15)
    for i in (0, 2, 4):
        assert abs(np.vdot(states[i].amplitudes, states[i + 1].amplitudes)) < 1e-15
