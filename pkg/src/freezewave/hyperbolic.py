"""Semi-discrete operators for the hyperbolic sub-problem ``w_t = -f(w)_x``.

Both schemes use a single global dissipation speed ``kappa`` in place of
local interface speeds.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .grid import BoundaryData, Grid1D, GridFunction, central_diff, discrete_laplacian

Flux = Callable[[np.ndarray], np.ndarray]


def burgers_flux(u):
    return 0.5 * u * u


@dataclass(frozen=True)
class HyperbolicContext:
    """Speed bound, Dirichlet data and flux shared by the hyperbolic operators.

    ``flux`` defaults to the Burgers flux; tests swap in a linear flux.
    """

    kappa: float
    bd: BoundaryData
    flux: Flux = burgers_flux

    def __post_init__(self) -> None:
        if not np.isfinite(self.kappa) or self.kappa < 0.0:
            raise ValueError(f"kappa must be finite and non-negative, got {self.kappa}")
        bound = max(abs(self.bd.left), abs(self.bd.right))
        if self.kappa < bound:
            raise ValueError(f"kappa={self.kappa} is below max |boundary value| = {bound}")


def kappa_from_initial(u0: GridFunction) -> float:
    """Global speed bound ``max_j |u0_j|`` over all nodes."""
    return float(np.max(np.abs(u0)))


def rusanov_rhs(w: GridFunction, grid: Grid1D, ctx: HyperbolicContext) -> GridFunction:
    """``-D0 f(w) + kappa dx / 2 * D0^2 w`` at interior nodes."""
    return -central_diff(ctx.flux(w), grid) + (ctx.kappa * grid.dx / 2.0) * discrete_laplacian(w, grid)


def rusanov_interface_flux(w: GridFunction, ctx: HyperbolicContext) -> np.ndarray:
    """Numerical flux at the ``n_cells`` interfaces ``j + 1/2``."""
    fw = ctx.flux(w)
    return 0.5 * (fw[1:] + fw[:-1]) - 0.5 * ctx.kappa * (w[1:] - w[:-1])


def minmod(a, b):
    """``(sgn a + sgn b) / 2 * min(|a|, |b|)``; works on scalars and arrays."""
    out = 0.5 * (np.sign(a) + np.sign(b)) * np.minimum(np.abs(a), np.abs(b))
    return float(out) if np.ndim(out) == 0 else out


def kt_slopes(w: GridFunction, grid: Grid1D) -> GridFunction:
    """Minmod-limited slopes at interior nodes, zero at both boundary nodes."""
    d = np.diff(w) / grid.dx
    s = np.zeros_like(w)
    s[1:-1] = minmod(d[:-1], d[1:])
    return s


def kt_reconstruction(w: GridFunction, grid: Grid1D) -> tuple[np.ndarray, np.ndarray]:
    """Left and right interface states ``(u_minus, u_plus)`` at ``j + 1/2``."""
    s = kt_slopes(w, grid)
    half = 0.5 * grid.dx
    u_minus = w[:-1] + half * s[:-1]
    u_plus = w[1:] - half * s[1:]
    return u_minus, u_plus


def kt_interface_flux(w: GridFunction, grid: Grid1D, ctx: HyperbolicContext) -> np.ndarray:
    u_minus, u_plus = kt_reconstruction(w, grid)
    return 0.5 * (ctx.flux(u_plus) + ctx.flux(u_minus)) - 0.5 * ctx.kappa * (u_plus - u_minus)


def kt_rhs(w: GridFunction, grid: Grid1D, ctx: HyperbolicContext) -> GridFunction:
    """Kurganov-Tadmor semi-discrete right-hand side with minmod reconstruction.

    Written in conservation form, ``-(H_{j+1/2} - H_{j-1/2}) / dx``, which
    expands to the usual four-flux, four-jump expression.
    """
    h = kt_interface_flux(w, grid, ctx)
    out = np.zeros_like(w)
    out[1:-1] = -(h[1:] - h[:-1]) / grid.dx
    return out
