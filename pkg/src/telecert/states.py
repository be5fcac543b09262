"""Qubit states used by the teleportation scenario.

Computational basis convention: ``|0> = |H>`` and ``|1> = |V>``, so the
product state ``|11>`` is the photonic ``|VV>``.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .linalg import DensityMatrix, projector

_S = 1 / np.sqrt(2)

KET0 = np.array([1, 0], dtype=complex)
KET1 = np.array([0, 1], dtype=complex)

PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}
IDENTITY2 = np.eye(2, dtype=complex)

SINGLET = np.array([0, 1, -1, 0], dtype=complex) * _S
TRIPLET0 = np.array([0, 1, 1, 0], dtype=complex) * _S
PHI_PLUS = np.array([1, 0, 0, 1], dtype=complex) * _S
PHI_MINUS = np.array([1, 0, 0, -1], dtype=complex) * _S
KET11 = np.array([0, 0, 0, 1], dtype=complex)


def pauli(axis: str) -> np.ndarray:
    """Pauli matrix for ``axis`` in ``{"x", "y", "z"}``."""
    try:
        return PAULI[axis].copy()
    except KeyError:
        raise ValueError(f"unknown Pauli axis {axis!r}") from None


class PureState(NamedTuple):
    """A labelled pure input state.

    ``axis`` and ``eigenvalue`` record which Pauli operator the state is an
    eigenvector of.
    """

    label: str
    amplitudes: np.ndarray
    axis: str
    eigenvalue: int


INPUT_LABELS = ("+x", "-x", "+y", "-y", "+z", "-z")


def input_states() -> tuple[PureState, ...]:
    """The six Pauli eigenstates in the order x = 0..5.

    (|0>+|1>)/sqrt2, (|0>-|1>)/sqrt2, (|0>+i|1>)/sqrt2, (|0>-i|1>)/sqrt2, |0>, |1>.
    """
    return (
        PureState("+x", _S * np.array([1, 1], dtype=complex), "x", +1),
        PureState("-x", _S * np.array([1, -1], dtype=complex), "x", -1),
        PureState("+y", _S * np.array([1, 1j], dtype=complex), "y", +1),
        PureState("-y", _S * np.array([1, -1j], dtype=complex), "y", -1),
        PureState("+z", KET0.copy(), "z", +1),
        PureState("-z", KET1.copy(), "z", -1),
    )


def channel_state_ideal(gamma: float) -> DensityMatrix:
    """gamma |psi-><psi-| + (1 - gamma) |11><11| on two qubits."""
    if not 0.0 <= gamma <= 1.0:
        raise ValueError(f"gamma must lie in [0, 1], got {gamma}")
    m = gamma * projector(SINGLET) + (1.0 - gamma) * projector(KET11)
    return DensityMatrix(m, (2, 2))


def maximally_mixed(n_qubits: int = 2) -> DensityMatrix:
    d = 2 ** n_qubits
    return DensityMatrix(np.eye(d) / d, (2,) * n_qubits)
