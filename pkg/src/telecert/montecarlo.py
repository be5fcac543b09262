"""Finite-statistics coincidence counting with Poissonian noise.

Each input state defines one measurement setting: Bob measures the Pauli
operator the input is an eigenvector of.  Per setting the total number of
coincidences is Poisson distributed with mean ``shots_per_setting`` and is
split multinomially over (BSM outcome, Bob result).

Random streams are derived from ``numpy.random.SeedSequence`` with a spawn
key built from the setting (or replica) index, so results do not depend on
evaluation order.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .benchmarks import CorrectionScheme, check_corrections, default_corrections
from .linalg import dag
from .states import IDENTITY2, INPUT_LABELS, PAULI, input_states
from .teleport import Assemblage
from .witness import THETA_FLOOR, THETA_MAX, _COMPONENTS, golden_section

RESULTS = (+1, -1)
UNDETECTED = frozenset({"rest"})
CSV_COLUMNS = ("input", "bsm_outcome", "basis", "result", "count")

_SIM_STREAM = 0
_BOOT_STREAM = 1


@dataclass(frozen=True)
class ShotConfig:
    shots_per_setting: float = 10_000
    seed: int = 0
    replicas: int = 200

    def __post_init__(self):
        if self.shots_per_setting < 1:
            raise ValueError("shots_per_setting must be >= 1")
        if self.replicas < 1:
            raise ValueError("replicas must be >= 1")


@dataclass(frozen=True)
class CountRecord:
    input: str
    bsm_outcome: str
    basis: str
    result: int
    count: int

    def __post_init__(self):
        if self.count < 0:
            raise ValueError("counts must be non-negative")
        if self.result not in RESULTS:
            raise ValueError(f"result must be +1 or -1, got {self.result}")


def rng_for(seed: int, *key: int) -> np.random.Generator:
    """Independent generator for ``(seed, key...)``."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=key))


def basis_projectors(axis: str) -> np.ndarray:
    """``[P(+1), P(-1)]`` for a Pauli axis."""
    s = PAULI[axis]
    return np.array([(IDENTITY2 + s) / 2, (IDENTITY2 - s) / 2])


def setting_axes() -> dict[str, str]:
    return {p.label: p.axis for p in input_states()}


def outcome_probabilities(asm: Assemblage) -> np.ndarray:
    """``P[x, a, s]``: joint probability of BSM outcome ``a`` and Bob result ``s``."""
    axes = setting_axes()
    out = np.empty((len(asm.input_labels), len(asm.outcome_labels), 2))
    for x, label in enumerate(asm.input_labels):
        proj = basis_projectors(axes[label])
        out[x] = np.real(np.einsum("sij,aji->as", proj, asm.sigma[:, x]))
    return out


def simulate_counts(asm: Assemblage, cfg: ShotConfig) -> list[CountRecord]:
    axes = setting_axes()
    probs = outcome_probabilities(asm)
    records = []
    for x, label in enumerate(asm.input_labels):
        rng = rng_for(cfg.seed, _SIM_STREAM, x)
        p = np.clip(probs[x].ravel(), 0.0, None)
        p = p / p.sum()
        total = rng.poisson(cfg.shots_per_setting)
        counts = rng.multinomial(total, p).reshape(probs[x].shape)
        for a, outcome in enumerate(asm.outcome_labels):
            for s, result in enumerate(RESULTS):
                records.append(CountRecord(label, outcome, axes[label], result, int(counts[a, s])))
    return records


def count_table(records: Iterable[CountRecord], outcomes: Sequence[str] | None = None):
    """Arrange records into ``n[x, a, s]`` over the six inputs.

    Returns ``(n, outcomes)``.  Raises ``ValueError`` when an input setting
    is absent.
    """
    records = list(records)
    if outcomes is None:
        outcomes = []
        for r in records:
            if r.bsm_outcome not in outcomes:
                outcomes.append(r.bsm_outcome)
    outcomes = tuple(outcomes)
    axes = setting_axes()
    n = np.zeros((len(INPUT_LABELS), len(outcomes), 2))
    seen = set()
    for r in records:
        if r.input not in axes:
            raise ValueError(f"unknown input label {r.input!r}")
        if r.basis != axes[r.input]:
            raise ValueError(f"input {r.input} must be measured in basis {axes[r.input]}, got {r.basis}")
        x = INPUT_LABELS.index(r.input)
        n[x, outcomes.index(r.bsm_outcome), RESULTS.index(r.result)] += r.count
        seen.add(r.input)
    missing = [lab for lab in INPUT_LABELS if lab not in seen]
    if missing:
        raise ValueError(f"records are missing settings for inputs {missing}")
    return n, outcomes


def poisson_replicas(n: np.ndarray, replicas: int, seed: int) -> np.ndarray:
    """Parametric bootstrap: every bin redrawn from Poisson(observed count)."""
    out = np.empty((replicas,) + n.shape)
    for r in range(replicas):
        out[r] = rng_for(seed, _BOOT_STREAM, r).poisson(n)
    return out


def _frequencies(n: np.ndarray) -> np.ndarray:
    totals = n.sum(axis=(-2, -1), keepdims=True)
    with np.errstate(invalid="ignore", divide="ignore"):
        return np.where(totals > 0, n / np.where(totals > 0, totals, 1), np.nan)


def _witness_coefficients(freq: np.ndarray, singlet: int) -> np.ndarray:
    """``k[..., c]`` so that the estimate is ``k0 + k1 cos t + k2 sin t``."""
    axes = setting_axes()
    weights = np.empty((3, len(INPUT_LABELS), 2))
    for c, name in enumerate(("const", "cos", "sin")):
        for x, label in enumerate(INPUT_LABELS):
            proj = basis_projectors(axes[label])
            weights[c, x] = np.real(np.einsum("ij,sji->s", _COMPONENTS[name][x], proj))
    return np.einsum("cxs,...xs->...c", weights, freq[..., :, singlet, :])


def _witness_from_counts(n: np.ndarray, outcomes, theta) -> np.ndarray:
    k = _witness_coefficients(_frequencies(n), outcomes.index("psi-"))
    return k[..., 0] + k[..., 1] * np.cos(theta) + k[..., 2] * np.sin(theta)


def estimate_witness(
    records: Iterable[CountRecord], theta: float, replicas: int = 200, seed: int = 0
) -> tuple[float, float]:
    """Plug-in witness estimate at ``theta`` and its bootstrap standard deviation."""
    n, outcomes = count_table(records)
    value = float(_witness_from_counts(n, outcomes, theta))
    boot = _witness_from_counts(poisson_replicas(n, replicas, seed), outcomes, theta)
    std = float(np.nanstd(boot, ddof=1)) if replicas > 1 else 0.0
    return value, std


def _minimize_counts(n: np.ndarray, outcomes, tol: float = 1e-8):
    k = _witness_coefficients(_frequencies(n), outcomes.index("psi-"))
    k = np.nan_to_num(k)
    lo = np.full(k.shape[:-1], THETA_FLOOR)
    hi = np.full(k.shape[:-1], THETA_MAX)
    return golden_section(lambda t: k[..., 0] + k[..., 1] * np.cos(t) + k[..., 2] * np.sin(t), lo, hi, tol)


def estimate_witness_min(
    records: Iterable[CountRecord], replicas: int = 200, seed: int = 0
) -> tuple[float, float, float]:
    """Minimise the plug-in witness over theta.

    Returns ``(theta_min, w_min, std)``; every bootstrap replica is
    re-minimised so the spread includes the optimisation over theta.
    """
    n, outcomes = count_table(records)
    theta, value = _minimize_counts(n, outcomes)
    _, boot = _minimize_counts(poisson_replicas(n, replicas, seed), outcomes)
    std = float(np.std(boot, ddof=1)) if replicas > 1 else 0.0
    return float(theta), float(value), std


def _fidelity_weights(outcomes, corrections: CorrectionScheme) -> np.ndarray:
    """Indicator ``w[x, a, s]`` of the Bob result that counts as success."""
    axes = setting_axes()
    states = {p.label: p.amplitudes for p in input_states()}
    w = np.zeros((len(INPUT_LABELS), len(outcomes), 2))
    for a, outcome in enumerate(outcomes):
        if outcome in UNDETECTED:
            continue
        if outcome not in corrections:
            raise KeyError(f"no correction unitary for outcome {outcome!r}")
        u = np.asarray(corrections[outcome], dtype=complex)
        for x, label in enumerate(INPUT_LABELS):
            psi = states[label]
            target = dag(u) @ np.outer(psi, psi.conj()) @ u
            proj = basis_projectors(axes[label])
            overlap = np.real(np.einsum("ij,sji->s", target, proj))
            if not np.allclose(np.sort(overlap), [0.0, 1.0], atol=1e-10):
                raise ValueError(f"correction for {outcome!r} is not diagonal in basis {axes[label]}")
            w[x, a] = overlap
    return w


def _fidelity_from_counts(n: np.ndarray, outcomes, weights: np.ndarray) -> np.ndarray:
    detected = np.array([o not in UNDETECTED for o in outcomes])
    freq = _frequencies(n)
    success = np.einsum("xas,...xas->...", weights, freq)
    p_det = np.sum(freq[..., :, detected, :], axis=(-3, -2, -1))
    return success / p_det


def estimate_fidelity(
    records: Iterable[CountRecord],
    corrections: CorrectionScheme | None = None,
    replicas: int = 200,
    seed: int = 0,
) -> tuple[float, float]:
    """Normalised average fidelity over detected outcomes, with bootstrap std."""
    corrections = default_corrections() if corrections is None else corrections
    check_corrections(corrections)
    n, outcomes = count_table(records)
    weights = _fidelity_weights(outcomes, corrections)
    value = float(_fidelity_from_counts(n, outcomes, weights))
    boot = _fidelity_from_counts(poisson_replicas(n, replicas, seed), outcomes, weights)
    std = float(np.nanstd(boot, ddof=1)) if replicas > 1 else 0.0
    return value, std


def write_records_csv(records: Iterable[CountRecord], path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for r in records:
            writer.writerow([r.input, r.bsm_outcome, r.basis, r.result, r.count])


def read_records_csv(path) -> list[CountRecord]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
            raise ValueError(f"expected columns {CSV_COLUMNS}, got {reader.fieldnames}")
        return [
            CountRecord(row["input"], row["bsm_outcome"], row["basis"], int(row["result"]), int(row["count"]))
            for row in reader
        ]
