import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.testing import assert_allclose

from telecert.benchmarks import gamma_entanglement_threshold
from telecert.optics import NoiseParams, noisy_channel_matrix
from telecert.states import PAULI, channel_state_ideal
from telecert.teleport import assemblage, partial_bsm
from telecert.witness import (
    evaluate_witness,
    golden_section,
    minimize_witness_numeric,
    optimal_theta_ideal,
    theta_min_noisy,
    violation_threshold_gamma,
    witness_ideal_closed_form,
    witness_min_ideal,
    witness_min_noisy,
    witness_noisy_closed_form,
    witness_operators,
    witness_value,
)

THETAS = np.linspace(0.05, math.pi / 2, 15)


def asm_ideal(g):
    return assemblage(channel_state_ideal(g))


def asm_noisy(g, p):
    return assemblage(noisy_channel_matrix(g, p))


def test_operators_at_right_angle():
    ops = witness_operators(math.pi / 2)
    assert_allclose(ops[("psi-", "+z")], np.diag([0, 4]), atol=1e-15)
    assert_allclose(ops[("psi-", "+x")], -2 * PAULI["x"])
    assert_allclose(ops[("psi-", "-y")], 2 * PAULI["y"])
    for key, op in ops.items():
        if key[0] == "rest":
            assert not op.any()
        assert_allclose(op, op.conj().T)


def test_operators_small_theta():
    ops = witness_operators(1e-9)
    for label in ("+x", "-x", "+y", "-y"):
        assert np.max(np.abs(ops[("psi-", label)])) < 1e-8


@pytest.mark.parametrize("theta", [0.0, -0.1, 2.0])
def test_operators_theta_range(theta):
    with pytest.raises(ValueError):
        witness_operators(theta)


def test_witness_key_values():
    assert evaluate_witness(asm_ideal(1.0), math.pi / 2).value == pytest.approx(-2, abs=1e-12)
    assert evaluate_witness(asm_ideal(0.5), math.pi / 4).value == pytest.approx(1 - math.sqrt(2), abs=1e-12)
    for t in THETAS:
        r = evaluate_witness(asm_ideal(0.0), t)
        assert r.value == pytest.approx(2 * (1 - math.cos(t)), abs=1e-12)
        assert not r.nonclassical


def test_witness_rejects_wrong_shape():
    asm = assemblage(channel_state_ideal(0.5), measurement=partial_bsm(three_outcome=True))
    with pytest.raises(ValueError):
        witness_value(asm, 0.3)


def test_ideal_closed_form_grid():
    for g in np.linspace(0, 1, 11):
        asm = asm_ideal(g)
        for t in THETAS:
            assert abs(witness_value(asm, t) - witness_ideal_closed_form(g, t)) < 1e-10
    assert witness_ideal_closed_form(0.0, 1e-12) == pytest.approx(0.0, abs=1e-20)


def test_noisy_closed_form_grid():
    for g in np.linspace(0, 1, 5):
        for V in (0.0, 0.5, 0.925):
            for d in (0.0, 0.5, 0.872):
                p = NoiseParams(V, d)
                asm = asm_noisy(g, p)
                for t in THETAS[::3]:
                    assert abs(witness_value(asm, t) - witness_noisy_closed_form(g, t, p)) < 1e-10


def test_noisy_reductions():
    for g, t in [(0.3, 0.4), (0.8, 1.2)]:
        assert witness_noisy_closed_form(g, t, NoiseParams(1, 1)) == pytest.approx(witness_ideal_closed_form(g, t))
        p = NoiseParams(0.7, 0.5)
        assert witness_noisy_closed_form(g, t, p) == pytest.approx(1 + 0.7 - 2 * g * 0.7 - (1 - g) * 1.7 * math.cos(t))
    V = 0.6
    for t in THETAS:
        assert witness_noisy_closed_form(0.0, t, NoiseParams(V, 0.9)) == pytest.approx((1 + V) * (1 - math.cos(t)))


def test_violation_threshold():
    assert violation_threshold_gamma(math.pi / 2) == pytest.approx(0.5)
    assert violation_threshold_gamma(1e-9) < 1e-8
    assert violation_threshold_gamma(math.pi / 3) == pytest.approx(1 / (1 + math.sqrt(3)))


@settings(deadline=None)
@given(st.floats(0.01, math.pi / 2), st.floats(0, 1))
def test_no_violation_below_threshold(theta, frac):
    g = frac * violation_threshold_gamma(theta)
    assert witness_ideal_closed_form(g, theta) >= -1e-12


def test_optimal_theta_ideal():
    assert optimal_theta_ideal(0.5) == pytest.approx(math.pi / 4)
    assert optimal_theta_ideal(1e-12) < 1e-11
    assert optimal_theta_ideal(1.0) == math.pi / 2


def test_witness_min_ideal():
    assert witness_min_ideal(0.0) == 0.0
    assert witness_min_ideal(0.5) == pytest.approx(1 - math.sqrt(2), abs=1e-12)
    assert witness_min_ideal(1.0) == -2.0
    for g in np.linspace(0.01, 0.99, 30):
        t = optimal_theta_ideal(g)
        assert abs(witness_min_ideal(g) - witness_value(asm_ideal(g), t)) < 1e-9


def test_theta_min_noisy():
    p = NoiseParams(0.925, 0.872)
    assert theta_min_noisy(0.0, p) == 0.0
    for g in (0.2, 0.6):
        assert theta_min_noisy(g, NoiseParams(0.8, 0.5)) == 0.0
        assert theta_min_noisy(g, NoiseParams(1, 1)) == pytest.approx(optimal_theta_ideal(g))
    assert_allclose(witness_min_noisy(np.array([0.3, 0.7]), p),
                    [witness_noisy_closed_form(g, theta_min_noisy(g, p), p) for g in (0.3, 0.7)])


def test_golden_section_scalar_and_vector():
    x, fx = golden_section(lambda t: (t - 0.3) ** 2, 0.0, 1.0, 1e-10)
    assert x == pytest.approx(0.3, abs=1e-9)
    centres = np.array([0.1, 0.5, 0.9])
    xs, _ = golden_section(lambda t: (t - centres) ** 2, np.zeros(3), np.ones(3), 1e-10)
    assert_allclose(xs, centres, atol=1e-9)


def test_minimizer_ideal():
    r = minimize_witness_numeric(asm_ideal(0.5))
    assert r.theta == pytest.approx(math.pi / 4, abs=1e-7)
    assert r.value == pytest.approx(1 - math.sqrt(2), abs=1e-12)
    r0 = minimize_witness_numeric(asm_ideal(0.0))
    assert r0.at_boundary and r0.value == pytest.approx(0.0, abs=1e-11)


def test_minimizer_noisy():
    p = NoiseParams(0.925, 0.872)
    r = minimize_witness_numeric(asm_noisy(0.8, p))
    assert abs(r.theta - theta_min_noisy(0.8, p)) < 1e-6


def test_minimizer_is_minimal():
    rng = np.random.default_rng(0)
    asm = asm_noisy(0.6, NoiseParams(0.9, 0.8))
    best = minimize_witness_numeric(asm)
    for t in rng.uniform(1e-6, math.pi / 2, 50):
        assert best.value <= witness_value(asm, t) + 1e-15


def test_witness_valid_on_separable_noisy_states():
    p = NoiseParams(0.925, 0.872)
    g_ent = gamma_entanglement_threshold(p)
    for g in np.linspace(0, g_ent, 25):
        assert minimize_witness_numeric(asm_noisy(g, p)).value >= -1e-9
