"""Photonic state generation and the two-parameter noise model.

Bob's photon carries polarization and a path label.  The path register has
three levels ``tau1, tau2, tau3``; anything displaced into ``tau3`` has
left the interferometer and is discarded.  Operators on the extended state
act on ``A-pol (2) x B-pol (2) x path (3)``, a 12-dimensional space.

Noise is described by :class:`NoiseParams`: ``V`` is the singlet weight of
the source state ``V |psi-><psi-| + (1 - V) I/4`` and ``delta`` the calcite
dephasing strength (1 means no dephasing).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import DensityMatrix, dag, kron, projector
from .states import IDENTITY2, PAULI, SINGLET

N_PATHS = 3
LOST = 2
EXT_DIMS = (2, 2, N_PATHS)


@dataclass(frozen=True)
class NoiseParams:
    V: float = 1.0
    delta: float = 1.0

    def __post_init__(self):
        for name in ("V", "delta"):
            value = getattr(self, name)
            if not (0.0 <= value <= 1.0):
                raise ValueError(f"{name} must lie in [0, 1], got {value}")

    @property
    def v_amplitude(self) -> float:
        """The singlet amplitude ``v`` with ``V = v**2``."""
        return math.sqrt(self.V)

    @classmethod
    def from_amplitude(cls, v: float, delta: float) -> "NoiseParams":
        return cls(V=v * v, delta=delta)

    @property
    def coherence(self) -> float:
        """Surviving coherence factor ``(1 - 2 delta)**2`` after two calcites."""
        return (1.0 - 2.0 * self.delta) ** 2


NOISELESS = NoiseParams(1.0, 1.0)


def gamma_from_alpha(alpha: float) -> float:
    """Channel weight produced by the interferometer HWP set to ``alpha`` (radians).

    gamma = 4 sin^2(2 alpha) / (3 - cos(4 alpha)) on ``[0, pi/4]``.
    """
    if not (0.0 <= alpha <= math.pi / 4 + 1e-15):
        raise ValueError(f"alpha must lie in [0, pi/4], got {alpha}")
    return 4.0 * math.sin(2 * alpha) ** 2 / (3.0 - math.cos(4 * alpha))


def alpha_from_gamma(gamma: float, iterations: int = 60) -> float:
    """Invert :func:`gamma_from_alpha` by bisection on ``[0, pi/4]``."""
    if not (0.0 <= gamma <= 1.0):
        raise ValueError(f"gamma must lie in [0, 1], got {gamma}")
    if gamma == 0.0:
        return 0.0
    if gamma == 1.0:
        return math.pi / 4
    lo, hi = 0.0, math.pi / 4
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        if gamma_from_alpha(mid) < gamma:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def path_ket(i: int) -> np.ndarray:
    k = np.zeros(N_PATHS, dtype=complex)
    k[i] = 1
    return k


def calcite_operator() -> np.ndarray:
    """Polarization-dependent path shift on Bob's photon, as a 12x12 matrix.

    ``|H, tau_i> -> |H, tau_i>`` and ``|V, tau_i> -> |V, tau_{i+1}>``.  The
    column for ``|V, tau3>`` is zero: that amplitude is already lost.
    """
    shift = np.zeros((2 * N_PATHS, 2 * N_PATHS), dtype=complex)
    for i in range(N_PATHS):
        shift[0 * N_PATHS + i, 0 * N_PATHS + i] = 1  # H keeps its path
        if i + 1 < N_PATHS:
            shift[1 * N_PATHS + i + 1, 1 * N_PATHS + i] = 1
    return kron(IDENTITY2, shift)


def hwp_unitary(alpha: float) -> np.ndarray:
    """Half-wave plate at angle ``alpha``: [[cos2a, sin2a], [sin2a, -cos2a]]."""
    c, s = math.cos(2 * alpha), math.sin(2 * alpha)
    return np.array([[c, s], [s, -c]], dtype=complex)


def on_bob_polarization(u: np.ndarray) -> np.ndarray:
    """Lift a 2x2 operator on Bob's polarization to the extended space."""
    return kron(IDENTITY2, u, np.eye(N_PATHS))


def dephasing(rho: np.ndarray, delta: float) -> np.ndarray:
    """delta * rho + (1 - delta) * Z rho Z with Z on Bob's polarization."""
    if not (0.0 <= delta <= 1.0):
        raise ValueError(f"delta must lie in [0, 1], got {delta}")
    z = on_bob_polarization(PAULI["z"])
    return delta * rho + (1.0 - delta) * z @ rho @ z


def discard_lost(rho: np.ndarray) -> np.ndarray:
    """Project out the ``tau3`` level; the trace drops by the lost weight."""
    keep = on_bob_polarization(IDENTITY2) - kron(IDENTITY2, IDENTITY2, projector(path_ket(LOST)))
    return keep @ rho @ keep


def noisy_calcite(rho: np.ndarray, delta: float) -> np.ndarray:
    # two calcites starting from tau1 can never push weight beyond tau3
    lost = np.real(np.trace(rho.reshape(4, N_PATHS, 4, N_PATHS)[:, LOST, :, LOST]))
    assert abs(lost) < 1e-14, "path register overflow"
    c = calcite_operator()
    return discard_lost(dephasing(c @ rho @ dag(c), delta))


def spdc_state(params: NoiseParams) -> np.ndarray:
    """Source state V |psi-><psi-| + (1 - V) I/4."""
    return params.V * projector(SINGLET) + (1.0 - params.V) * np.eye(4) / 4


def trace_out_path(rho_ext: np.ndarray) -> np.ndarray:
    t = rho_ext.reshape(4, N_PATHS, 4, N_PATHS)
    return np.einsum("ikjk->ij", t)


def constructive_pipeline(alpha: float, params: NoiseParams = NOISELESS) -> DensityMatrix:
    """Simulate the calcite interferometer on Bob's photon.

    source -> calcite -> HWP(alpha) -> calcite -> HWP(pi/4), each calcite
    followed by dephasing, then the path is traced out and the state is
    renormalised over the photons that were not lost.
    """
    if not (0.0 <= alpha <= math.pi / 4 + 1e-15):
        raise ValueError(f"alpha must lie in [0, pi/4], got {alpha}")
    rho = kron(spdc_state(params), projector(path_ket(0)))
    rho = noisy_calcite(rho, params.delta)
    u = on_bob_polarization(hwp_unitary(alpha))
    rho = u @ rho @ dag(u)
    rho = noisy_calcite(rho, params.delta)
    u = on_bob_polarization(hwp_unitary(math.pi / 4))
    rho = u @ rho @ dag(u)

    rho_ab = trace_out_path(rho)
    kept = np.trace(rho_ab).real
    if kept < 1e-12:
        raise ValueError("all photons lost; cannot post-select")
    rho_ab = rho_ab / kept
    return DensityMatrix(0.5 * (rho_ab + dag(rho_ab)), (2, 2))


def noisy_channel_matrix(gamma: float, params: NoiseParams = NOISELESS) -> np.ndarray:
    """Closed-form noisy channel state in the basis 00, 01, 10, 11."""
    if not (0.0 <= gamma <= 1.0):
        raise ValueError(f"gamma must lie in [0, 1], got {gamma}")
    V = params.V
    off = -2.0 * params.coherence * V * gamma
    return np.array(
        [
            [(1 - V) * gamma, 0, 0, 0],
            [0, 2 - V * (2 - 3 * gamma) - gamma, off, 0],
            [0, off, (1 + V) * gamma, 0],
            [0, 0, 0, 2 + V * (2 - 3 * gamma) - gamma],
        ],
        dtype=complex,
    ) / 4


def noisy_channel_state(gamma: float, params: NoiseParams = NOISELESS) -> DensityMatrix:
    return DensityMatrix(noisy_channel_matrix(gamma, params), (2, 2))
