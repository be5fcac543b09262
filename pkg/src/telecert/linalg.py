"""Small dense complex linear algebra for qubit registers.

Matrices are plain ``numpy`` arrays of dtype ``complex128``.  Subsystem
dimensions are always listed left to right in the same order as the factors
of the Kronecker product, i.e. ``dims=[2, 2]`` for ``kron(rho_A, rho_B)``
means subsystem 0 is A and subsystem 1 is B.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Sequence

import numpy as np

# construction checks
CONSTRUCTION_TOL = 1e-10
# Jacobi stopping criterion on the off-diagonal Frobenius norm
JACOBI_TOL = 1e-14
JACOBI_MAX_SWEEPS = 100
# tolerance for comparisons exposed to users
USER_TOL = 1e-9


def as_matrix(m) -> np.ndarray:
    """Return ``m`` as a finite 2-d complex array."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def kron(*factors) -> np.ndarray:
    """Kronecker product of one or more matrices, left factor outermost."""
    if not factors:
        raise ValueError("kron needs at least one factor")
    return reduce(np.kron, (as_matrix(f) for f in factors))


def dag(m) -> np.ndarray:
    return np.conj(np.transpose(m))


def projector(vec) -> np.ndarray:
    """|v><v| for a state vector ``vec``."""
    v = np.asarray(vec, dtype=complex).ravel()
    return np.outer(v, v.conj())


def is_hermitian(m, tol: float = CONSTRUCTION_TOL) -> bool:
    m = np.asarray(m)
    return m.shape[0] == m.shape[1] and bool(np.max(np.abs(m - dag(m)), initial=0.0) <= tol)


def hermitian_eigenvalues(m, tol: float = 1e-8) -> np.ndarray:
    """Ascending eigenvalues of a Hermitian matrix by cyclic Jacobi rotations.

    Each rotation zeroes one off-diagonal pair ``(p, q)``: the phase of
    ``m[p, q]`` is first removed with a diagonal unitary, then a real Givens
    rotation diagonalises the remaining 2x2 block.  Sweeps stop once the
    off-diagonal Frobenius norm drops below ``JACOBI_TOL`` (scaled by the
    matrix norm when that exceeds one) or after ``JACOBI_MAX_SWEEPS``.

    Raises ``ValueError`` if ``m`` is not Hermitian within ``tol``.
    """
    a = as_matrix(m).copy()
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if not is_hermitian(a, tol):
        raise ValueError("matrix is not Hermitian")
    a = 0.5 * (a + dag(a))

    threshold = JACOBI_TOL * max(1.0, float(np.linalg.norm(a)))
    for _ in range(JACOBI_MAX_SWEEPS):
        if _off_norm(a) < threshold:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                r = abs(apq)
                if r == 0.0:
                    continue
                phase = np.exp(1j * np.angle(apq))
                app, aqq = a[p, p].real, a[q, q].real
                diff = aqq - app
                if r < abs(diff) * 1e-36:
                    t = r / diff
                else:
                    # smaller root of t^2 + 2 phi t - 1 = 0, t = tan(rotation angle)
                    phi = diff / (2.0 * r)
                    t = 1.0 / (abs(phi) + np.hypot(phi, 1.0))
                    if phi < 0:
                        t = -t
                c = 1.0 / np.hypot(t, 1.0)
                s = t * c
                # columns p, q of the unitary diag(1, conj(phase)) @ [[c, s], [-s, c]]
                g = np.array([[c, s], [-s * np.conj(phase), c * np.conj(phase)]])
                a[:, [p, q]] = a[:, [p, q]] @ g
                a[[p, q], :] = dag(g) @ a[[p, q], :]
                # Rutishauser's diagonal update keeps tiny eigenvalues accurate
                a[p, p] = app - t * r
                a[q, q] = aqq + t * r
                a[p, q] = a[q, p] = 0.0
    return np.sort(np.real(np.diag(a)))


def _off_norm(a: np.ndarray) -> float:
    return float(np.linalg.norm(a[~np.eye(a.shape[0], dtype=bool)]))


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A validated density matrix with subsystem dimensions.

    Construction checks Hermiticity and unit trace to ``CONSTRUCTION_TOL``
    and positivity (minimum eigenvalue >= -1e-9).
    """

    matrix: np.ndarray
    dims: tuple[int, ...]

    def __init__(self, matrix, dims: Sequence[int] | None = None):
        m = as_matrix(matrix)
        n = m.shape[0]
        if m.shape != (n, n):
            raise ValueError(f"density matrix must be square, got shape {m.shape}")
        dims = (n,) if dims is None else tuple(int(d) for d in dims)
        if int(np.prod(dims)) != n:
            raise ValueError(f"dims {dims} do not multiply to {n}")
        if not is_hermitian(m):
            raise ValueError("density matrix is not Hermitian")
        tr = np.trace(m).real
        if abs(tr - 1.0) > CONSTRUCTION_TOL:
            raise ValueError(f"density matrix has trace {tr}, expected 1")
        if hermitian_eigenvalues(m)[0] < -1e-9:
            raise ValueError("density matrix is not positive semidefinite")
        m = m.copy()
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "dims", dims)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.matrix, dtype=dtype)

    @property
    def shape(self):
        return self.matrix.shape

    def eigenvalues(self) -> np.ndarray:
        return hermitian_eigenvalues(self.matrix)


def _check_subsystem(dims: Sequence[int], subsystem: int) -> None:
    if not 0 <= subsystem < len(dims):
        raise IndexError(f"subsystem {subsystem} out of range for dims {tuple(dims)}")


def ptrace(m, dims: Sequence[int], subsystem: int) -> np.ndarray:
    """Trace out one subsystem of a (not necessarily normalised) operator."""
    dims = list(dims)
    _check_subsystem(dims, subsystem)
    k = len(dims)
    t = np.asarray(m, dtype=complex).reshape(dims + dims)
    t = np.trace(t, axis1=subsystem, axis2=subsystem + k)
    rest = dims[:subsystem] + dims[subsystem + 1:]
    d = int(np.prod(rest)) if rest else 1
    return t.reshape(d, d)


def partial_trace(rho: DensityMatrix, subsystem: int) -> DensityMatrix:
    """Reduced state after tracing out ``subsystem``."""
    _check_subsystem(rho.dims, subsystem)
    rest = rho.dims[:subsystem] + rho.dims[subsystem + 1:]
    return DensityMatrix(ptrace(rho.matrix, rho.dims, subsystem), rest or (1,))


def partial_transpose(rho, subsystem: int, dims: Sequence[int] = (2, 2)) -> np.ndarray:
    """Transpose the indices of one qubit of a two-qubit operator.

    ``rho`` may be a :class:`DensityMatrix` (its own dims are used) or a
    bare 4x4 array.
    """
    if isinstance(rho, DensityMatrix):
        dims = rho.dims
        rho = rho.matrix
    dims = tuple(dims)
    if dims != (2, 2):
        raise ValueError(f"partial transpose only supports dims (2, 2), got {dims}")
    _check_subsystem(dims, subsystem)
    t = np.asarray(rho, dtype=complex).reshape(2, 2, 2, 2)
    if subsystem == 0:
        t = t.transpose(2, 1, 0, 3)
    else:
        t = t.transpose(0, 3, 2, 1)
    return t.reshape(4, 4)
