"""One-parameter family of non-classical teleportation witnesses.

For the six Pauli inputs and the two-outcome singlet measurement, the
witness operators on Bob's qubit are (outcome ``psi-``; all ``rest``
operators vanish)::

    +x: -2 sin(t) X      -x: +2 sin(t) X
    +y: -2 sin(t) Y      -y: +2 sin(t) Y
    +z: 4 (1 - cos t) |1><1|
    -z: 4 (1 + cos t) |0><0|

with ``t`` in ``(0, pi/2]``.  The value ``W = sum_{a,x} tr[F_{a|x} sigma_{a|x}]``
is non-negative on every assemblage reachable with a classical channel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .optics import NOISELESS, NoiseParams
from .states import INPUT_LABELS, KET0, KET1, PAULI
from .linalg import projector
from .teleport import Assemblage

THETA_FLOOR = 1e-6
THETA_MAX = math.pi / 2
NONCLASSICAL_TOL = 1e-12

INV_PHI = (math.sqrt(5) - 1) / 2
INV_PHI2 = (3 - math.sqrt(5)) / 2


def witness_components() -> dict[str, np.ndarray]:
    """Split the ``psi-`` operators as ``F(t) = C0 + cos(t) C1 + sin(t) C2``.

    Returns arrays of shape ``(6, 2, 2)`` keyed ``"const"``, ``"cos"`` and
    ``"sin"``, ordered like :data:`~telecert.states.INPUT_LABELS`.
    """
    zero = np.zeros((2, 2), dtype=complex)
    p0, p1 = projector(KET0), projector(KET1)
    x, y = PAULI["x"], PAULI["y"]
    const = [zero, zero, zero, zero, 4 * p1, 4 * p0]
    cos = [zero, zero, zero, zero, -4 * p1, 4 * p0]
    sin = [-2 * x, 2 * x, -2 * y, 2 * y, zero, zero]
    return {k: np.array(v) for k, v in (("const", const), ("cos", cos), ("sin", sin))}


_COMPONENTS = witness_components()


def _check_theta(theta: float) -> None:
    if not (0.0 < theta <= THETA_MAX + 1e-15):
        raise ValueError(f"theta must lie in (0, pi/2], got {theta}")


def witness_operators(theta: float) -> dict[tuple[str, str], np.ndarray]:
    """Map ``(outcome, input label) -> F`` for the given ``theta``."""
    _check_theta(theta)
    f = _COMPONENTS["const"] + math.cos(theta) * _COMPONENTS["cos"] + math.sin(theta) * _COMPONENTS["sin"]
    ops = {}
    for x, label in enumerate(INPUT_LABELS):
        ops[("psi-", label)] = f[x]
        ops[("rest", label)] = np.zeros((2, 2), dtype=complex)
    return ops


@dataclass(frozen=True)
class WitnessResult:
    gamma: float | None
    theta: float
    value: float

    @property
    def nonclassical(self) -> bool:
        return self.value < -NONCLASSICAL_TOL


def _check_shape(asm: Assemblage) -> None:
    if tuple(asm.input_labels) != INPUT_LABELS:
        raise ValueError(f"witness needs inputs {INPUT_LABELS}, got {asm.input_labels}")
    if tuple(asm.outcome_labels) != ("psi-", "rest"):
        raise ValueError(f"witness needs outcomes ('psi-', 'rest'), got {asm.outcome_labels}")


def witness_value(asm: Assemblage, theta: float) -> float:
    """Plain ``sum_{a,x} tr[F_{a|x}(theta) sigma_{a|x}]``."""
    _check_shape(asm)
    ops = witness_operators(theta)
    total = 0.0
    for a, outcome in enumerate(asm.outcome_labels):
        for x, label in enumerate(asm.input_labels):
            total += np.trace(ops[(outcome, label)] @ asm.sigma[a, x]).real
    return float(total)


def evaluate_witness(asm: Assemblage, theta: float, gamma: float | None = None) -> WitnessResult:
    return WitnessResult(gamma, theta, witness_value(asm, theta))


def witness_ideal_closed_form(gamma: float, theta: float) -> float:
    """-2 gamma sin(t) + 2 (1 - gamma)(1 - cos t)."""
    return -2 * gamma * math.sin(theta) + 2 * (1 - gamma) * (1 - math.cos(theta))


def violation_threshold_gamma(theta: float) -> float:
    """Smallest ``gamma`` above which the ideal family violates at ``theta``."""
    _check_theta(theta)
    return (1 - math.cos(theta)) / (1 - math.cos(theta) + math.sin(theta))


def optimal_theta_ideal(gamma: float) -> float:
    """arctan(gamma / (1 - gamma)); ``gamma = 1`` gives ``pi/2``."""
    if not (0.0 <= gamma <= 1.0):
        raise ValueError(f"gamma must lie in [0, 1], got {gamma}")
    if gamma == 1.0:
        return THETA_MAX
    return min(max(math.atan2(gamma, 1.0 - gamma), 0.0), THETA_MAX)


def witness_min_ideal(gamma: float) -> float:
    """2 (1 - gamma)(1 - sqrt(1 + (gamma / (1 - gamma))^2)); ``-2`` at ``gamma = 1``."""
    if not (0.0 <= gamma <= 1.0):
        raise ValueError(f"gamma must lie in [0, 1], got {gamma}")
    if gamma == 1.0:
        return -2.0
    r = gamma / (1 - gamma)
    return 2 * (1 - gamma) * (1 - math.sqrt(1 + r * r))


def _noisy_coefficients(gamma, params: NoiseParams):
    # W = offset - cos_coef * cos(t) - sin_coef * sin(t)
    V = params.V
    offset = 1 + V - 2 * gamma * V
    cos_coef = (1 - gamma) * (1 + V)
    sin_coef = 2 * gamma * params.coherence * V
    return offset, cos_coef, sin_coef


def witness_noisy_closed_form(gamma: float, theta: float, params: NoiseParams = NOISELESS) -> float:
    """1 + V - 2 gamma V - (1 - gamma)(1 + V) cos t - 2 gamma (1 - 2 delta)^2 V sin t."""
    offset, c, s = _noisy_coefficients(gamma, params)
    return offset - c * math.cos(theta) - s * math.sin(theta)


def theta_min_noisy(gamma: float, params: NoiseParams = NOISELESS) -> float:
    """arctan[2 (1 - 2 delta)^2 V gamma / ((1 + V)(1 - gamma))]."""
    _, c, s = _noisy_coefficients(gamma, params)
    return math.atan2(s, c)


def witness_min_noisy(gamma, params: NoiseParams = NOISELESS):
    """Noisy witness at :func:`theta_min_noisy`; vectorised over ``gamma``."""
    offset, c, s = _noisy_coefficients(np.asarray(gamma, dtype=float), params)
    theta = np.arctan2(s, c)
    value = offset - c * np.cos(theta) - s * np.sin(theta)
    return float(value) if np.ndim(value) == 0 else value


def golden_section(f, a, b, tol: float = 1e-8):
    """Golden-section search for a minimum of a unimodal ``f`` on ``[a, b]``.

    ``a`` and ``b`` may be arrays, in which case ``f`` must map an array of
    abscissae to an array of values and every bracket is searched at once.
    Returns ``(x, f(x))`` where ``x`` is the better of the final bracket
    end points and interior probes.
    """
    a = np.asarray(a, dtype=float).copy()
    b = np.asarray(b, dtype=float).copy()
    h = float(np.max(b - a))
    n = 0 if h <= tol else int(math.ceil(math.log(tol / h) / math.log(INV_PHI)))
    c = a + INV_PHI2 * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(n):
        left = fc < fd
        # left: minimum in [a, d]; otherwise in [c, b]
        b = np.where(left, d, b)
        a = np.where(left, a, c)
        new_c = np.where(left, a + INV_PHI2 * (b - a), d)
        new_d = np.where(left, c, a + INV_PHI * (b - a))
        fnew = f(np.where(left, new_c, new_d))
        fc, fd = np.where(left, fnew, fd), np.where(left, fc, fnew)
        c, d = new_c, new_d
    candidates = np.stack([a, c, d, b])
    values = np.stack([f(a), fc, fd, f(b)])
    best = np.argmin(values, axis=0)
    x = np.take_along_axis(candidates, best[None], axis=0)[0]
    fx = np.take_along_axis(values, best[None], axis=0)[0]
    if x.ndim == 0:
        return float(x), float(fx)
    return x, fx


@dataclass(frozen=True)
class MinimumResult:
    theta: float
    value: float
    at_boundary: bool

    def __iter__(self):
        return iter((self.theta, self.value))


def minimize_witness_numeric(asm: Assemblage, tol: float = 1e-8) -> MinimumResult:
    """Minimise ``W(theta)`` over ``[THETA_FLOOR, pi/2]`` by golden-section search."""
    _check_shape(asm)
    # W(t) = k0 + cos(t) k1 + sin(t) k2 with k from the psi- members
    sig = asm.sigma[0]
    k = [float(np.einsum("xij,xji->", _COMPONENTS[name], sig).real) for name in ("const", "cos", "sin")]

    def w(t):
        return k[0] + k[1] * np.cos(t) + k[2] * np.sin(t)

    theta, value = golden_section(w, THETA_FLOOR, THETA_MAX, tol)
    boundary = min(theta - THETA_FLOOR, THETA_MAX - theta) < 10 * tol
    return MinimumResult(theta, witness_value(asm, theta), boundary)
