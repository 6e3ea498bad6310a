"""Discrete phase conditions that determine the co-moving frame speed ``mu``."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

from .grid import Grid1D, GridFunction, central_diff, discrete_laplacian, interior_dot


class DegeneratePhase(ArithmeticError):
    """The phase condition has a vanishing denominator (flat profile)."""


class PhaseKind(str, Enum):
    ORTHOGONAL = "orthogonal"
    FIXED = "fixed"


def default_guard(grid: Grid1D) -> float:
    return 1e-12 * (grid.n_cells - 1) * grid.dx


@dataclass(frozen=True, eq=False)
class PhaseCondition:
    """Orthogonal condition, or fixed condition anchored at a reference ``vhat``.

    ``denom_guard`` is compared against dx-weighted inner products.
    """

    kind: PhaseKind
    grid: Grid1D
    vhat: Optional[GridFunction] = None
    denom_guard: float = -1.0
    dvhat: Optional[GridFunction] = field(init=False, default=None, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", PhaseKind(self.kind))
        if self.denom_guard < 0.0:
            object.__setattr__(self, "denom_guard", default_guard(self.grid))
        if self.kind is PhaseKind.FIXED:
            if self.vhat is None:
                raise ValueError("fixed phase condition needs a reference function")
            vhat = np.array(self.vhat, dtype=float)
            if vhat.shape != (self.grid.n_nodes,) or not np.all(np.isfinite(vhat)):
                raise ValueError("reference function must be finite with one value per node")
            dvhat = central_diff(vhat, self.grid)
            if self.grid.dx * interior_dot(dvhat, dvhat) <= self.denom_guard:
                raise DegeneratePhase("reference function is flat")
            vhat.setflags(write=False)
            dvhat.setflags(write=False)
            object.__setattr__(self, "vhat", vhat)
            object.__setattr__(self, "dvhat", dvhat)

    @classmethod
    def orthogonal(cls, grid: Grid1D, **kw) -> "PhaseCondition":
        return cls(PhaseKind.ORTHOGONAL, grid, **kw)

    @classmethod
    def fixed(cls, grid: Grid1D, vhat: GridFunction, **kw) -> "PhaseCondition":
        return cls(PhaseKind.FIXED, grid, vhat, **kw)


def orthogonal_speed(w: GridFunction, grid: Grid1D, guard: Optional[float] = None) -> float:
    """Speed making ``D0^2 w - w D0 w + mu D0 w`` orthogonal to ``D0 w``.

    The dx weight of the inner product cancels, so plain sums are used.
    """
    if guard is None:
        guard = default_guard(grid)
    dw = central_diff(w, grid)
    den = interior_dot(dw, dw)
    if grid.dx * den <= guard:
        raise DegeneratePhase(f"|D0 w|^2 = {grid.dx * den:.3e} is below the guard {guard:.3e}")
    num = interior_dot(dw, discrete_laplacian(w, grid) - w * dw)
    return -num / den


def fixed_phase_speed(
    w0: GridFunction,
    explicit_rhs: GridFunction,
    pc: PhaseCondition,
    dt: float,
    *,
    dt_in_denominator: bool = True,
) -> float:
    """Half-explicit speed for the fixed phase condition.

    Chooses ``mu`` so that the forward Euler update
    ``w0 + dt * explicit_rhs + dt * mu * D0 w0`` is orthogonal to ``D0 vhat``
    after subtracting ``vhat``. With ``dt_in_denominator=False`` the factor
    ``dt`` is dropped from the denominator; that variant does not satisfy
    the condition and is kept only for comparison.
    """
    if pc.kind is not PhaseKind.FIXED:
        raise ValueError("fixed_phase_speed needs a fixed phase condition")
    if not dt > 0.0:
        raise ValueError(f"dt must be positive, got {dt}")
    dw0 = central_diff(w0, pc.grid)
    den = interior_dot(pc.dvhat, dw0)
    if abs(pc.grid.dx * den) <= pc.denom_guard:
        raise DegeneratePhase(f"<D0 vhat, D0 w0> = {pc.grid.dx * den:.3e} is below the guard")
    num = interior_dot(pc.dvhat, w0 + dt * explicit_rhs - pc.vhat)
    if dt_in_denominator:
        den = dt * den
    return -num / den
