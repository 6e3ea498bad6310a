"""Uniform node-based grid and Dirichlet-aware difference operators.

Grid functions are plain ``float64`` arrays with one entry per node,
boundary nodes included. The unknowns are the interior nodes ``1..n-1``;
the boundary entries hold pinned Dirichlet data. Operators return zero at
the boundary nodes so every grid function keeps the same length.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable

import numpy as np
import numpy.typing as npt

GridFunction = npt.NDArray[np.float64]

MIN_CELLS = 4


@dataclass(frozen=True)
class Grid1D:
    """Uniform grid on ``[l_minus, l_plus]`` with ``n_cells + 1`` nodes."""

    l_minus: float
    l_plus: float
    n_cells: int

    def __post_init__(self) -> None:
        if not (np.isfinite(self.l_minus) and np.isfinite(self.l_plus)):
            raise ValueError("grid endpoints must be finite")
        if not self.l_minus < self.l_plus:
            raise ValueError(
                f"need l_minus < l_plus, got [{self.l_minus}, {self.l_plus}]"
            )
        if int(self.n_cells) != self.n_cells or self.n_cells < MIN_CELLS:
            raise ValueError(f"need an integer n_cells >= {MIN_CELLS}, got {self.n_cells}")

    @property
    def dx(self) -> float:
        return (self.l_plus - self.l_minus) / self.n_cells

    @property
    def n_nodes(self) -> int:
        return self.n_cells + 1

    @cached_property
    def nodes(self) -> np.ndarray:
        x = self.l_minus + np.arange(self.n_nodes) * self.dx
        x[-1] = self.l_plus
        x.setflags(write=False)
        return x

    def sample(self, func: Callable[[np.ndarray], np.ndarray]) -> GridFunction:
        """Evaluate a vectorised function at every node."""
        return check_grid_function(np.asarray(func(self.nodes), dtype=float), self)


def make_grid(l_minus: float, l_plus: float, n_cells: int) -> Grid1D:
    if int(n_cells) != n_cells:
        raise ValueError(f"n_cells must be an integer, got {n_cells}")
    return Grid1D(float(l_minus), float(l_plus), int(n_cells))


@dataclass(frozen=True)
class BoundaryData:
    """Dirichlet values pinned at the two boundary nodes."""

    left: float
    right: float

    def __post_init__(self) -> None:
        if not (np.isfinite(self.left) and np.isfinite(self.right)):
            raise ValueError("boundary data must be finite")

    @classmethod
    def from_function(cls, u: GridFunction) -> "BoundaryData":
        return cls(float(u[0]), float(u[-1]))


def check_grid_function(u: GridFunction, grid: Grid1D) -> GridFunction:
    """Validate length and finiteness of ``u`` on ``grid`` and return it."""
    u = np.asarray(u, dtype=float)
    if u.shape != (grid.n_nodes,):
        raise ValueError(f"expected shape ({grid.n_nodes},), got {u.shape}")
    if not np.all(np.isfinite(u)):
        raise ValueError("grid function has non-finite entries")
    return u


def central_diff(u: GridFunction, grid: Grid1D) -> GridFunction:
    """Central difference quotient ``(u[j+1] - u[j-1]) / (2 dx)``, zero at boundaries."""
    out = np.zeros_like(u)
    out[1:-1] = (u[2:] - u[:-2]) / (2.0 * grid.dx)
    return out


def discrete_laplacian(u: GridFunction, grid: Grid1D) -> GridFunction:
    """Three-point Laplacian, zero at boundaries.

    The stencil reads the boundary entries of ``u`` itself, so the caller is
    responsible for keeping those equal to the Dirichlet data.
    """
    out = np.zeros_like(u)
    out[1:-1] = (u[2:] - 2.0 * u[1:-1] + u[:-2]) / grid.dx**2
    return out


def interior_dot(u: GridFunction, v: GridFunction) -> float:
    """Unweighted sum over interior nodes of ``u * v``."""
    return float(np.dot(u[1:-1], v[1:-1]))


def inner_product(u: GridFunction, v: GridFunction, grid: Grid1D) -> float:
    """Discrete L2 inner product ``dx * sum_{interior} u_j v_j``."""
    if len(u) != grid.n_nodes or len(v) != grid.n_nodes:
        raise ValueError("grid function lengths do not match the grid")
    return grid.dx * interior_dot(u, v)


def l2_norm(u: GridFunction, grid: Grid1D) -> float:
    return float(np.sqrt(inner_product(u, u, grid)))
