"""Implicit steps for the heat sub-problem ``z_t = z_xx`` with Dirichlet data.

Both steppers are instances of the theta method on the interior unknowns,

    (I - theta dt D0^2) z1 = (I + (1 - theta) dt D0^2) z0,

with ``theta = 1`` (backward Euler) and ``theta = 1/2`` (Crank-Nicolson).
Boundary values are moved to the right-hand side.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import lapack

from .grid import BoundaryData, Grid1D, GridFunction, discrete_laplacian


class SingularSystemError(np.linalg.LinAlgError):
    """Raised when tridiagonal elimination meets a zero pivot."""


def tridiagonal_solve(lower, diag, upper, rhs) -> np.ndarray:
    """Solve a tridiagonal system by LU elimination with partial pivoting.

    Parameters
    ----------
    lower, upper : array of length n-1
        Sub- and super-diagonal.
    diag : array of length n
    rhs : array of length n
    """
    diag = np.asarray(diag, dtype=float)
    n = diag.shape[0]
    lower = np.asarray(lower, dtype=float)
    upper = np.asarray(upper, dtype=float)
    rhs = np.asarray(rhs, dtype=float)
    if lower.shape != (n - 1,) or upper.shape != (n - 1,) or rhs.shape != (n,):
        raise ValueError("inconsistent tridiagonal system shapes")
    if n == 1:
        if diag[0] == 0.0:
            raise SingularSystemError("zero pivot in 1x1 system")
        return rhs / diag
    _, _, _, x, info = lapack.dgtsv(lower, diag, upper, rhs[:, None])
    if info > 0:
        raise SingularSystemError(f"zero pivot at row {info - 1}")
    if info < 0:
        raise ValueError(f"illegal argument {-info} to dgtsv")
    return x[:, 0]


@dataclass(frozen=True)
class _ThetaFactor:
    """LU factors of ``I - theta dt D0^2`` on the interior nodes."""

    r: float
    theta: float
    dl: np.ndarray
    d: np.ndarray
    du: np.ndarray
    du2: np.ndarray
    ipiv: np.ndarray

    def solve(self, rhs: np.ndarray) -> np.ndarray:
        x, info = lapack.dgttrs(self.dl, self.d, self.du, self.du2, self.ipiv, rhs[:, None])
        if info != 0:
            raise ValueError(f"dgttrs failed with info={info}")
        return x[:, 0]


@lru_cache(maxsize=64)
def _theta_factor(n_interior: int, r: float, theta: float) -> _ThetaFactor:
    off = np.full(n_interior - 1, -theta * r)
    diag = np.full(n_interior, 1.0 + 2.0 * theta * r)
    dl, d, du, du2, ipiv, info = lapack.dgttrf(off, diag, off.copy())
    if info > 0:
        raise SingularSystemError(f"zero pivot at row {info - 1}")
    for a in (dl, d, du, du2, ipiv):
        a.setflags(write=False)
    return _ThetaFactor(r, theta, dl, d, du, du2, ipiv)


def theta_step(z: GridFunction, grid: Grid1D, dt: float, bd: BoundaryData, theta: float) -> GridFunction:
    """One theta-method step; the factorization is cached per ``(grid, dt, theta)``."""
    if not dt > 0.0:
        raise ValueError(f"dt must be positive, got {dt}")
    r = dt / grid.dx**2
    factor = _theta_factor(grid.n_cells - 1, r, theta)
    # the explicit part reads z's own boundary entries, so pin them first
    z0 = np.array(z, dtype=float)
    z0[0], z0[-1] = bd.left, bd.right
    rhs = z0[1:-1].copy()
    if theta != 1.0:
        rhs += (1.0 - theta) * dt * discrete_laplacian(z0, grid)[1:-1]
    rhs[0] += theta * r * bd.left
    rhs[-1] += theta * r * bd.right
    z1 = np.empty_like(z0)
    z1[0], z1[-1] = bd.left, bd.right
    z1[1:-1] = factor.solve(rhs)
    return z1


def backward_euler_step(z: GridFunction, grid: Grid1D, dt: float, bd: BoundaryData) -> GridFunction:
    """``z1 = (I - dt D0^2)^{-1} z0``."""
    return theta_step(z, grid, dt, bd, 1.0)


def crank_nicolson_step(z: GridFunction, grid: Grid1D, dt: float, bd: BoundaryData) -> GridFunction:
    """``z1 = (I - dt/2 D0^2)^{-1} (I + dt/2 D0^2) z0``."""
    return theta_step(z, grid, dt, bd, 0.5)
