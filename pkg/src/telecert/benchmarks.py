"""Average teleportation fidelity and PPT entanglement detection."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .linalg import DensityMatrix, dag, hermitian_eigenvalues, partial_transpose
from .optics import NoiseParams, noisy_channel_matrix
from .states import IDENTITY2, PAULI, input_states
from .teleport import Assemblage

CLASSICAL_FIDELITY = 2.0 / 3.0
# returned by gamma_entanglement_threshold when no gamma in [0, 1] is entangled
NEVER_ENTANGLED = 1.0 + 1e-8

CorrectionScheme = Mapping[str, np.ndarray]


def default_corrections() -> dict[str, np.ndarray]:
    """Identity after ``psi-``, Z after ``psi+``."""
    return {"psi-": IDENTITY2.copy(), "psi+": PAULI["z"].copy()}


def check_corrections(corrections: CorrectionScheme) -> None:
    for label, u in corrections.items():
        u = np.asarray(u)
        if u.shape != (2, 2) or np.max(np.abs(dag(u) @ u - IDENTITY2)) > 1e-10:
            raise ValueError(f"correction for {label!r} is not a 2x2 unitary")


@dataclass(frozen=True)
class FidelityResult:
    normalized: float
    raw: float
    detected_probability: float


def fidelity_terms(asm: Assemblage, corrections: CorrectionScheme | None = None) -> FidelityResult:
    """Average fidelity over detected outcomes, raw and renormalised.

    ``raw`` is ``(1/|x|) sum_{a,x} <psi_x| U_a sigma_{a|x} U_a^dag |psi_x>``
    over detected outcomes; ``normalized`` divides by the mean detected
    probability so that perfect teleportation scores 1.
    """
    corrections = default_corrections() if corrections is None else corrections
    check_corrections(corrections)
    states = {p.label: p.amplitudes for p in input_states()}
    n_x = len(asm.input_labels)
    num = 0.0
    det = 0.0
    for a, outcome in enumerate(asm.outcome_labels):
        if not asm.detected[a]:
            continue
        if outcome not in corrections:
            raise KeyError(f"no correction unitary for outcome {outcome!r}")
        u = np.asarray(corrections[outcome], dtype=complex)
        for x, label in enumerate(asm.input_labels):
            psi = states[label]
            num += float(np.real(psi.conj() @ u @ asm.sigma[a, x] @ dag(u) @ psi))
            det += float(np.real(np.trace(asm.sigma[a, x])))
    raw = num / n_x
    p_det = det / n_x
    if p_det <= 0:
        raise ValueError("no detected outcome has non-zero probability")
    return FidelityResult(raw / p_det, raw, p_det)


def average_fidelity(asm: Assemblage, corrections: CorrectionScheme | None = None) -> float:
    return fidelity_terms(asm, corrections).normalized


def fidelity_ideal_closed_form(gamma: float) -> float:
    """(1 + 2 gamma) / 3 for the ideal channel family with psi+- detection."""
    if not (0.0 <= gamma <= 1.0):
        raise ValueError(f"gamma must lie in [0, 1], got {gamma}")
    return (1.0 + 2.0 * gamma) / 3.0


def classical_bound() -> float:
    return CLASSICAL_FIDELITY


def is_quantum_regime(fidelity: float) -> bool:
    return fidelity > CLASSICAL_FIDELITY


def ppt_min_eigenvalue(rho) -> float:
    """Smallest eigenvalue of the partial transpose on Bob's qubit."""
    if isinstance(rho, DensityMatrix) and rho.dims != (2, 2):
        raise ValueError(f"need a two-qubit state, got dims {rho.dims}")
    return float(hermitian_eigenvalues(partial_transpose(rho, 1))[0])


def is_entangled(rho) -> bool:
    return ppt_min_eigenvalue(rho) < 0.0


def gamma_entanglement_threshold(params: NoiseParams, tol: float = 1e-8) -> float:
    """Smallest ``gamma`` whose noisy channel state is entangled.

    Bisection on ``[0, 1]`` to ``tol``.  Returns ``0.0`` when already
    entangled at ``gamma = tol`` and :data:`NEVER_ENTANGLED` when the state
    is separable even at ``gamma = 1``.
    """

    def entangled(g: float) -> bool:
        return ppt_min_eigenvalue(noisy_channel_matrix(g, params)) < 0.0

    if not entangled(1.0):
        return NEVER_ENTANGLED
    if entangled(tol):
        return 0.0
    lo, hi = tol, 1.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if entangled(mid):
            hi = mid
        else:
            lo = mid
    return hi
