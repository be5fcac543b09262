"""Conditional states prepared for Bob by a measurement on Alice's side.

Tensor order of the full register is ``(A0, A, B)``: the input qubit, Alice's
half of the channel state and Bob's half.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .linalg import CONSTRUCTION_TOL, DensityMatrix, hermitian_eigenvalues, kron, projector, ptrace
from .states import IDENTITY2, SINGLET, TRIPLET0, PureState, input_states

NULL_PROB = 1e-12


@dataclass(frozen=True, eq=False)
class Measurement:
    """Labelled POVM on the 4-dimensional ``A0 A`` space.

    ``detected`` marks outcomes the apparatus actually registers; the
    remaining ones are kept for completeness but ignored by fidelity sums.
    """

    labels: tuple[str, ...]
    operators: tuple[np.ndarray, ...]
    detected: tuple[bool, ...]

    def __post_init__(self):
        if not (len(self.labels) == len(self.operators) == len(self.detected)):
            raise ValueError("labels, operators and detected flags must align")
        total = np.zeros((4, 4), dtype=complex)
        for label, op in zip(self.labels, self.operators):
            if op.shape != (4, 4):
                raise ValueError(f"operator {label!r} is not 4x4")
            if hermitian_eigenvalues(op)[0] < -CONSTRUCTION_TOL:
                raise ValueError(f"operator {label!r} is not positive")
            total = total + op
        if np.max(np.abs(total - np.eye(4))) > CONSTRUCTION_TOL:
            raise ValueError("measurement operators do not sum to the identity")

    def index(self, label: str) -> int:
        return self.labels.index(label)


def partial_bsm(three_outcome: bool = False) -> Measurement:
    """Partial Bell-state measurement.

    Two outcomes: ``psi-`` against everything else (``rest``), as used by
    the witness.  Three outcomes additionally resolves ``psi+``, matching a
    beam-splitter analyser that sees coincidences in the same or different
    output arms.
    """
    p_minus = projector(SINGLET)
    if not three_outcome:
        return Measurement(("psi-", "rest"), (p_minus, np.eye(4) - p_minus), (True, False))
    p_plus = projector(TRIPLET0)
    return Measurement(
        ("psi-", "psi+", "rest"),
        (p_minus, p_plus, np.eye(4) - p_minus - p_plus),
        (True, True, False),
    )


@dataclass(frozen=True, eq=False)
class Assemblage:
    """Bob's unnormalised conditional states ``sigma[a, x] = p(a|x) rho_{a|x}``.

    ``sigma`` has shape ``(n_outcomes, n_inputs, 2, 2)``.
    """

    outcome_labels: tuple[str, ...]
    input_labels: tuple[str, ...]
    sigma: np.ndarray
    detected: tuple[bool, ...]

    @property
    def probabilities(self) -> np.ndarray:
        """``p[a, x]``."""
        return np.real(np.trace(self.sigma, axis1=-2, axis2=-1))

    def state(self, a: int, x: int) -> np.ndarray | None:
        """Normalised conditional state, or ``None`` for a null outcome."""
        p = self.probabilities[a, x]
        if p <= NULL_PROB:
            return None
        return self.sigma[a, x] / p

    def conditional(self, a: int, x: int) -> DensityMatrix | None:
        s = self.state(a, x)
        return None if s is None else DensityMatrix(s)

    @property
    def null(self) -> np.ndarray:
        return self.probabilities <= NULL_PROB

    def bob_marginal(self, x: int) -> np.ndarray:
        return self.sigma[:, x].sum(axis=0)

    def __add__(self, other: "Assemblage") -> "Assemblage":
        self._check_compatible(other)
        return Assemblage(self.outcome_labels, self.input_labels, self.sigma + other.sigma, self.detected)

    def scaled(self, weight: float) -> "Assemblage":
        return Assemblage(self.outcome_labels, self.input_labels, weight * self.sigma, self.detected)

    def _check_compatible(self, other: "Assemblage") -> None:
        if (self.outcome_labels, self.input_labels) != (other.outcome_labels, other.input_labels):
            raise ValueError("assemblages have different outcomes or inputs")


def _channel_matrix(rho_ab) -> np.ndarray:
    if isinstance(rho_ab, DensityMatrix):
        if rho_ab.dims != (2, 2):
            raise ValueError(f"channel state must have dims (2, 2), got {rho_ab.dims}")
        return rho_ab.matrix
    m = np.asarray(rho_ab, dtype=complex)
    if m.shape != (4, 4):
        raise ValueError(f"channel state must be 4x4, got {m.shape}")
    return m


def assemblage(
    rho_ab,
    inputs: Sequence[PureState] | None = None,
    measurement: Measurement | None = None,
) -> Assemblage:
    """Build the assemblage with explicit 8x8 operators.

    sigma[a, x] = tr_{A0 A}[(M_a x I_B) (|psi_x><psi_x| x rho_AB)].
    """
    inputs = input_states() if inputs is None else tuple(inputs)
    measurement = partial_bsm() if measurement is None else measurement
    rho = _channel_matrix(rho_ab)

    sigma = np.empty((len(measurement.operators), len(inputs), 2, 2), dtype=complex)
    lifted = [kron(m, IDENTITY2) for m in measurement.operators]
    for x, psi in enumerate(inputs):
        joint = kron(projector(psi.amplitudes), rho)
        for a, m in enumerate(lifted):
            # trace out A (index 1) then A0 (index 0)
            s = ptrace(m @ joint, (2, 2, 2), 1)
            sigma[a, x] = ptrace(s, (2, 2), 0)
    return Assemblage(tuple(measurement.labels), tuple(p.label for p in inputs), sigma, measurement.detected)


def singlet_conditional(rho_ab, psi: np.ndarray) -> np.ndarray:
    """Unnormalised Bob state for the ``psi-`` outcome and input ``a|0> + b|1>``.

    Uses the reduced form ``(1/2) <chi| rho_AB |chi>_A`` with
    ``|chi> = conj(a)|1> - conj(b)|0>``, skipping the 8x8 construction.
    """
    rho = _channel_matrix(rho_ab)
    a, b = np.asarray(psi, dtype=complex)
    chi = np.array([-np.conj(b), np.conj(a)])
    t = rho.reshape(2, 2, 2, 2)
    return 0.5 * np.einsum("i,ikjl,j->kl", chi.conj(), t, chi)


def singlet_assemblage(rho_ab, inputs: Sequence[PureState] | None = None) -> Assemblage:
    """Two-outcome assemblage via :func:`singlet_conditional`.

    The ``rest`` member follows from no-signalling: it is Bob's marginal
    (``tr_A rho_AB``) minus the singlet member.
    """
    inputs = input_states() if inputs is None else tuple(inputs)
    rho = _channel_matrix(rho_ab)
    marginal = ptrace(rho, (2, 2), 0)
    sigma = np.empty((2, len(inputs), 2, 2), dtype=complex)
    for x, psi in enumerate(inputs):
        sigma[0, x] = singlet_conditional(rho, psi.amplitudes)
        sigma[1, x] = marginal - sigma[0, x]
    return Assemblage(("psi-", "rest"), tuple(p.label for p in inputs), sigma, (True, False))
