"""Acceptance criteria, each at its stated tolerance.

A PASS/FAIL line per criterion is printed in the pytest terminal summary.
"""

import math
import time

import numpy as np
import pytest
from scipy.optimize import brentq

from telecert.benchmarks import average_fidelity, gamma_entanglement_threshold, ppt_min_eigenvalue
from telecert.cli import main
from telecert.fit import FitInput, fit_noise_params
from telecert.montecarlo import ShotConfig, estimate_witness, estimate_witness_min, simulate_counts
from telecert.optics import NoiseParams, constructive_pipeline, gamma_from_alpha, noisy_channel_matrix
from telecert.states import channel_state_ideal
from telecert.teleport import assemblage, partial_bsm
from telecert.witness import (
    minimize_witness_numeric,
    witness_min_ideal,
    witness_min_noisy,
    witness_noisy_closed_form,
    witness_value,
)

EXPERIMENT = NoiseParams(0.925, 0.872)
BSM3 = partial_bsm(three_outcome=True)


def ideal_asm(g):
    return assemblage(channel_state_ideal(g))


def noisy_asm(g, p):
    return assemblage(noisy_channel_matrix(g, p))


def pipeline_fidelity(g):
    return average_fidelity(assemblage(channel_state_ideal(g), measurement=BSM3))


@pytest.mark.criterion("1. ideal witness pipeline = closed form")
def test_criterion_1_ideal_witness():
    start = time.perf_counter()
    worst = 0.0
    for g in np.linspace(0, 1, 11):
        asm = ideal_asm(g)
        for t in np.linspace(math.pi / 30, math.pi / 2, 15):
            exact = -2 * g * math.sin(t) + 2 * (1 - g) * (1 - math.cos(t))
            worst = max(worst, abs(witness_value(asm, t) - exact))
    elapsed = time.perf_counter() - start
    assert worst < 1e-10
    assert elapsed < 1.0


@pytest.mark.criterion("2. noisy witness pipeline = V-weight closed form")
def test_criterion_2_noisy_witness():
    start = time.perf_counter()
    worst = 0.0
    axis = np.linspace(0, 1, 5)
    thetas = np.linspace(math.pi / 20, math.pi / 2, 10)
    for V in axis:
        for d in axis:
            p = NoiseParams(V, d)
            for g in axis:
                asm = noisy_asm(g, p)
                for t in thetas:
                    worst = max(worst, abs(witness_value(asm, t) - witness_noisy_closed_form(g, t, p)))
    elapsed = time.perf_counter() - start
    assert worst < 1e-10, "mismatch against the V = singlet-weight convention"
    assert elapsed < 5.0


@pytest.mark.criterion("3. numeric optimal angle = atan(gamma/(1-gamma))")
def test_criterion_3_optimal_theta():
    for g in np.arange(1, 20) * 0.05:
        res = minimize_witness_numeric(ideal_asm(g))
        assert abs(res.theta - math.atan(g / (1 - g))) < 1e-6
        assert abs(res.value - witness_min_ideal(g)) < 1e-9


@pytest.mark.criterion("4. key witness values")
def test_criterion_4_key_values():
    assert abs(witness_min_ideal(0.5) - (1 - math.sqrt(2))) < 1e-9
    assert abs(minimize_witness_numeric(ideal_asm(0.5)).value - (1 - math.sqrt(2))) < 1e-9
    assert witness_min_ideal(0.0) == 0.0
    assert minimize_witness_numeric(ideal_asm(0.0)).value >= 0.0
    assert abs(witness_value(ideal_asm(1.0), math.pi / 2) + 2) < 1e-12


@pytest.mark.criterion("5. interferometer model = noisy channel matrix")
def test_criterion_5_constructive_optics():
    worst = 0.0
    for alpha in np.linspace(0, math.pi / 4, 5):
        for V in (0.5, 0.9, 1.0):
            for d in (0.7, 0.9, 1.0):
                p = NoiseParams(V, d)
                rho = constructive_pipeline(alpha, p).matrix
                worst = max(worst, np.max(np.abs(rho - noisy_channel_matrix(gamma_from_alpha(alpha), p))))
    assert worst < 1e-10
    assert gamma_from_alpha(math.radians(45)) == 1.0
    assert gamma_from_alpha(0.0) == 0.0


@pytest.mark.criterion("6. fidelity closed form, 2/3 crossing, beyond-fidelity region")
def test_criterion_6_fidelity():
    gs = np.linspace(0, 1, 41)
    assert max(abs(pipeline_fidelity(g) - (1 + 2 * g) / 3) for g in gs) < 1e-10
    crossing = brentq(lambda g: pipeline_fidelity(g) - 2 / 3, 0.2, 0.8, xtol=1e-13)
    assert abs(crossing - 0.5) < 1e-9
    hits = [g for g in np.linspace(0.1, 0.3, 21)
            if pipeline_fidelity(g) < 2 / 3 and minimize_witness_numeric(ideal_asm(g)).value < 0]
    assert len(hits) == 21


@pytest.mark.criterion("7. entanglement thresholds and witness validity")
def test_criterion_7_entanglement():
    for g in np.unique(np.concatenate([np.logspace(-3, 0, 31), np.linspace(1e-3, 1, 100)])):
        assert ppt_min_eigenvalue(channel_state_ideal(g)) < 0
    g_ent = gamma_entanglement_threshold(EXPERIMENT, tol=1e-8)
    assert 0 < g_ent < 1
    assert ppt_min_eigenvalue(noisy_channel_matrix(g_ent, EXPERIMENT)) < 0
    assert ppt_min_eigenvalue(noisy_channel_matrix(g_ent - 1e-8, EXPERIMENT)) >= 0
    for g in np.linspace(0, g_ent, 50, endpoint=False):
        assert minimize_witness_numeric(noisy_asm(g, EXPERIMENT)).value >= -1e-9


@pytest.mark.criterion("8. Monte-Carlo accuracy, shot scaling and coverage")
def test_criterion_8_monte_carlo():
    start = time.perf_counter()
    theta = math.pi / 4
    gammas = np.linspace(0, 1, 11)
    asms = [noisy_asm(g, EXPERIMENT) for g in gammas]
    exact = np.array([witness_noisy_closed_form(g, theta, EXPERIMENT) for g in gammas])

    def run(shots, rep):
        out = np.empty((len(gammas), 2))
        for i, asm in enumerate(asms):
            recs = simulate_counts(asm, ShotConfig(shots, seed=1000 * rep + i))
            out[i] = estimate_witness(recs, theta, replicas=200, seed=1000 * rep + 500 + i)
        return out

    base = run(10_000, 0)
    assert np.all(np.abs(base[:, 0] - exact) < 3 * base[:, 1])

    quad = run(40_000, 0)
    ratio = base[:, 1] / quad[:, 1]
    assert np.all(np.abs(ratio / 2 - 1) < 0.2), ratio

    inside = []
    for rep in range(1, 201):
        est = run(10_000, rep)
        inside.append(np.abs(est[:, 0] - exact) <= est[:, 1])
    coverage = float(np.mean(inside))
    elapsed = time.perf_counter() - start
    print(f"witness 1-sigma coverage {coverage:.3f}, {elapsed:.1f} s")
    assert 0.60 <= coverage <= 0.75
    assert elapsed < 60.0


@pytest.mark.slow
@pytest.mark.criterion("9. noise-parameter fit recovery")
def test_criterion_9_fit():
    gammas = np.linspace(0, 1, 11)
    clean = fit_noise_params(FitInput(gammas, witness_min_noisy(gammas, EXPERIMENT)), replicas=20)
    assert abs(clean.V_hat - EXPERIMENT.V) < 1e-6
    assert abs(clean.delta_hat - EXPERIMENT.delta) < 1e-6

    mirrored = fit_noise_params(FitInput(gammas, witness_min_noisy(gammas, NoiseParams(0.925, 0.128))), replicas=2)
    assert abs(mirrored.delta_hat - 0.872) < 1e-6

    asms = [noisy_asm(g, EXPERIMENT) for g in gammas]
    hits_v = hits_d = 0
    trials = 100
    for k in range(trials):
        w, s = [], []
        for i, asm in enumerate(asms):
            recs = simulate_counts(asm, ShotConfig(10_000, seed=1000 * k + i))
            _, wm, sd = estimate_witness_min(recs, replicas=200, seed=1000 * k + 500 + i)
            w.append(wm)
            s.append(sd)
        res = fit_noise_params(FitInput(gammas, w, s), replicas=200, seed=k)
        hits_v += abs(res.V_hat - EXPERIMENT.V) <= res.sigma_V
        hits_d += abs(res.delta_hat - EXPERIMENT.delta) <= res.sigma_delta
    print(f"fit 1-sigma coverage: V {hits_v / trials:.2f}, delta {hits_d / trials:.2f}")
    assert hits_v / trials >= 0.60
    assert hits_d / trials >= 0.60


COMMANDS = [
    ["scan-witness", "--gamma-grid", "0:1:6", "--theta-grid", "6:90:8", "--shots", "10000", "--replicas", "50",
     "--V", "0.925", "--delta", "0.872", "--seed", "4"],
    ["scan-min", "--gamma-grid", "0:1:6", "--shots", "10000", "--replicas", "50", "--V", "0.925",
     "--delta", "0.872", "--seed", "4", "--format", "json"],
    ["scan-fidelity", "--gamma-grid", "0:1:6", "--shots", "10000", "--replicas", "50", "--seed", "4"],
    ["ent-threshold", "--V", "0.925", "--delta", "0.872"],
    ["simulate", "--alpha-deg", "22.5", "--shots", "10000", "--seed", "4", "--three-outcome"],
]


@pytest.mark.criterion("10. CLI determinism")
def test_criterion_10_determinism(tmp_path):
    data = tmp_path / "fit.csv"
    g = np.linspace(0, 1, 11)
    rows = "\n".join(f"{float(a)!r},{float(b)!r}" for a, b in zip(g, witness_min_noisy(g, EXPERIMENT) + 0.01 * np.sin(7 * g)))
    data.write_text("gamma,w_min\n" + rows + "\n")
    for argv in COMMANDS + [["fit", str(data), "--replicas", "50", "--seed", "4"]]:
        outs = []
        for rep in range(2):
            out = tmp_path / f"{argv[0]}-{rep}"
            assert main(argv + ["--out", str(out)]) == 0
            outs.append(out.read_bytes())
        assert outs[0] == outs[1], argv[0]
