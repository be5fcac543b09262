"""Estimate the noise parameters ``(V, delta)`` from optimised witness values.

The model for each point is the noisy witness evaluated at its optimal
angle.  It depends on ``delta`` only through ``(1 - 2 delta)^2``, so
``delta`` and ``1 - delta`` fit equally well; results are reported on the
``delta >= 1/2`` branch.
"""

from __future__ import annotations

import csv
import math
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import minimize

from .optics import NoiseParams
from .witness import witness_min_noisy

SCHEMA_VERSION = 1
BOUNDS = ((0.0, 1.0), (0.0, 1.0))
DIAMETER_TOL = 1e-10
WEAK_DELTA_BAND = 0.05
# fit reported in the literature for the reference apparatus (amplitude convention)
REFERENCE_V_AMPLITUDE = (0.962, 0.070)
REFERENCE_DELTA = (0.872, 0.053)


class FitError(RuntimeError):
    """The optimiser failed to converge from every start."""


@dataclass(frozen=True)
class FitInput:
    gamma: np.ndarray
    w_min: np.ndarray
    sigma: np.ndarray | None = None

    def __post_init__(self):
        g = np.asarray(self.gamma, dtype=float)
        w = np.asarray(self.w_min, dtype=float)
        if g.ndim != 1 or g.shape != w.shape:
            raise ValueError("gamma and w_min must be 1-d arrays of equal length")
        if len(g) < 2:
            raise ValueError("need at least two points")
        if len(np.unique(g)) != len(g):
            raise ValueError("gamma values must be distinct")
        if np.any((g < 0) | (g > 1)):
            raise ValueError("gamma values must lie in [0, 1]")
        if not np.all(np.isfinite(w)):
            raise ValueError("w_min values must be finite")
        object.__setattr__(self, "gamma", g)
        object.__setattr__(self, "w_min", w)
        if self.sigma is not None:
            s = np.asarray(self.sigma, dtype=float)
            if s.shape != g.shape or np.any(~(s > 0)):
                raise ValueError("sigma must be positive and match gamma")
            object.__setattr__(self, "sigma", s)

    @property
    def weights(self) -> np.ndarray:
        if self.sigma is None:
            return np.ones_like(self.gamma)
        return 1.0 / self.sigma**2

    @classmethod
    def from_csv(cls, path) -> "FitInput":
        """Read ``gamma,w_min[,sigma]`` with a header row."""
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = [h.strip() for h in next(reader, [])]
            if header[:2] != ["gamma", "w_min"] or len(header) > 3 or (len(header) == 3 and header[2] != "sigma"):
                raise ValueError(f"expected header gamma,w_min[,sigma], got {header}")
            rows = [r for r in reader if r]
        try:
            data = np.array([[float(v) for v in r] for r in rows], dtype=float)
        except ValueError as exc:
            raise ValueError(f"non-numeric entry: {exc}") from None
        if data.ndim != 2 or data.shape[1] != len(header):
            raise ValueError("rows do not match the header")
        sigma = data[:, 2] if len(header) == 3 else None
        return cls(data[:, 0], data[:, 1], sigma)


@dataclass
class FitResult:
    V_hat: float
    delta_hat: float
    sigma_V: float
    sigma_delta: float
    rss: float
    converged: bool
    n_points: int
    weighted: bool
    delta_weakly_identified: bool
    hessian_condition: float
    mirror_delta: float
    reference: dict = field(default_factory=dict)

    @property
    def v_amplitude_hat(self) -> float:
        return math.sqrt(self.V_hat)

    @property
    def sigma_v_amplitude(self) -> float:
        # first-order propagation through v = sqrt(V)
        return self.sigma_V / (2 * self.v_amplitude_hat) if self.V_hat > 0 else math.inf

    @property
    def params(self) -> NoiseParams:
        return NoiseParams(self.V_hat, self.delta_hat)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["v_amplitude_hat"] = self.v_amplitude_hat
        d["sigma_v_amplitude"] = self.sigma_v_amplitude
        d["schema_version"] = SCHEMA_VERSION
        return d


def model(gamma, V: float, delta: float) -> np.ndarray:
    return np.asarray(witness_min_noisy(gamma, NoiseParams(V, delta)))


def objective(x: Sequence[float], data: FitInput) -> float:
    V, delta = np.clip(x, 0.0, 1.0)
    r = data.w_min - model(data.gamma, V, delta)
    return float(np.sum(data.weights * r * r))


def _nelder_mead(data: FitInput, start):
    return minimize(
        objective,
        np.asarray(start, dtype=float),
        args=(data,),
        method="Nelder-Mead",
        bounds=BOUNDS,
        options={"xatol": DIAMETER_TOL, "fatol": math.inf, "maxiter": 20_000, "maxfev": 40_000},
    )


def _canonical(x) -> tuple[float, float]:
    V, delta = (float(v) for v in np.clip(x, 0.0, 1.0))
    return V, max(delta, 1.0 - delta)


def best_fit(data: FitInput, n_starts: int = 5, grid: int = 5):
    """Multi-start simplex fit; returns ``(V, delta, rss, converged)``.

    The objective is evaluated on a ``grid x grid`` lattice over the unit
    square and the ``n_starts`` best nodes seed independent simplex runs.
    """
    nodes = np.linspace(0.1, 0.9, grid)
    starts = [(v, d) for v in nodes for d in nodes]
    scores = [objective(s, data) for s in starts]
    order = np.argsort(scores, kind="stable")[:n_starts]
    runs = [_nelder_mead(data, starts[i]) for i in order]
    ok = [r for r in runs if r.success]
    pool = ok or runs
    best = min(pool, key=lambda r: r.fun)
    V, delta = _canonical(best.x)
    return V, delta, objective((V, delta), data), bool(ok)


def _hessian_condition(data: FitInput, V: float, delta: float, h: float = 1e-4) -> float:
    x0 = np.array([V, delta])
    # keep the stencil inside the unit square
    x0 = np.clip(x0, h, 1 - h)
    hess = np.empty((2, 2))
    for i in range(2):
        for j in range(2):
            ei, ej = np.eye(2)[i] * h, np.eye(2)[j] * h
            hess[i, j] = (
                objective(x0 + ei + ej, data)
                - objective(x0 + ei - ej, data)
                - objective(x0 - ei + ej, data)
                + objective(x0 - ei - ej, data)
            ) / (4 * h * h)
    ev = np.abs(np.linalg.eigvalsh(0.5 * (hess + hess.T)))
    return float(ev.max() / ev.min()) if ev.min() > 0 else math.inf


def fit_noise_params(
    data: FitInput, replicas: int = 200, seed: int = 0, n_starts: int = 5
) -> FitResult:
    """Least-squares fit of ``(V, delta)`` with bootstrap uncertainties.

    Point weights are ``1/sigma^2`` when the input carries sigma, otherwise
    uniform.  Uncertainties come from refitting ``replicas`` datasets with
    Gaussian noise added to ``w_min`` (per-point sigma if given, else the
    residual standard deviation).  Raises :class:`FitError` if no start
    converges.
    """
    V, delta, rss, converged = best_fit(data, n_starts=n_starts)
    if not converged:
        raise FitError("Nelder-Mead did not converge from any start")

    n = len(data.gamma)
    if data.sigma is not None:
        noise = data.sigma
    else:
        dof = max(n - 2, 1)
        noise = np.full(n, math.sqrt(rss / dof))
    centre = model(data.gamma, V, delta)

    boot = []
    if replicas > 1 and np.any(noise > 0):
        for r in range(replicas):
            rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(r,)))
            fake = FitInput(data.gamma, centre + rng.normal(0.0, noise), data.sigma)
            res = _nelder_mead(fake, (V, delta))
            boot.append(_canonical(res.x))
    if boot:
        boot = np.array(boot)
        sigma_V, sigma_delta = (float(s) for s in np.std(boot, axis=0, ddof=1))
    else:
        sigma_V = sigma_delta = 0.0

    v_ref, dv_ref = REFERENCE_V_AMPLITUDE
    return FitResult(
        V_hat=V,
        delta_hat=delta,
        sigma_V=sigma_V,
        sigma_delta=sigma_delta,
        rss=rss,
        converged=converged,
        n_points=n,
        weighted=data.sigma is not None,
        delta_weakly_identified=abs(delta - 0.5) < WEAK_DELTA_BAND,
        hessian_condition=_hessian_condition(data, V, delta),
        mirror_delta=1.0 - delta,
        reference={
            "v_amplitude": v_ref,
            "sigma_v_amplitude": dv_ref,
            "V_if_amplitude": v_ref**2,
            "V_if_weight": v_ref,
            "delta": REFERENCE_DELTA[0],
            "sigma_delta": REFERENCE_DELTA[1],
        },
    )
