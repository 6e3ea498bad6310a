"""Sub-problem solution operators and their Lie/Strang compositions.

The frozen Burgers system is split into

    (A)  z_t = z_xx,                           gamma_t = 0, mu_t = 0
    (B)  w_t = -(w^2/2)_x + mu w_x, phase condition, gamma_t = mu

Four full schemes are built from them:

    LO  Lie,    Rusanov + forward Euler,  backward Euler,  orthogonal phase
    LF  Lie,    Rusanov + forward Euler,  backward Euler,  fixed phase
    SO  Strang, Kurganov-Tadmor + Heun,   Crank-Nicolson,  orthogonal phase
    SF  Strang, Kurganov-Tadmor + Heun,   Crank-Nicolson,  fixed phase

A constant profile has no frame speed. The B steppers return it unchanged
with the previous ``mu`` rather than raising ``DegeneratePhase``.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from .grid import BoundaryData, Grid1D, GridFunction, central_diff
from .hyperbolic import HyperbolicContext, kappa_from_initial, kt_rhs, rusanov_rhs
from .parabolic import backward_euler_step, crank_nicolson_step
from .phase import PhaseCondition, PhaseKind, fixed_phase_speed, orthogonal_speed

CFL_LIMIT = 0.9


class Scheme(str, Enum):
    LO = "LO"
    LF = "LF"
    SO = "SO"
    SF = "SF"

    @classmethod
    def parse(cls, name: "str | Scheme") -> "Scheme":
        try:
            return cls(str(name.value if isinstance(name, Scheme) else name).upper())
        except ValueError:
            raise ValueError(f"unknown scheme {name!r}; choose from lo, lf, so, sf") from None

    @property
    def is_strang(self) -> bool:
        return self in (Scheme.SO, Scheme.SF)

    @property
    def phase_kind(self) -> PhaseKind:
        return PhaseKind.FIXED if self in (Scheme.LF, Scheme.SF) else PhaseKind.ORTHOGONAL


@dataclass(frozen=True, eq=False)
class FrozenState:
    """Profile in the co-moving frame, frame position and frame speed."""

    v: GridFunction
    gamma: float = 0.0
    mu: float = 0.0


@dataclass(frozen=True)
class SchemeConfig:
    scheme: Scheme
    dt: float
    ctx: HyperbolicContext
    pc: PhaseCondition
    grid: Grid1D
    # drop dt from the fixed-phase KT denominator (comparison only)
    kt_fixed_dt_in_denominator: bool = True

    def __post_init__(self) -> None:
        object.__setattr__(self, "scheme", Scheme.parse(self.scheme))
        if not (np.isfinite(self.dt) and self.dt > 0.0):
            raise ValueError(f"dt must be positive, got {self.dt}")
        cfl = self.ctx.kappa * self.dt / self.grid.dx
        if cfl > CFL_LIMIT:
            raise ValueError(f"CFL ratio kappa*dt/dx = {cfl:.3f} exceeds {CFL_LIMIT}")
        if self.pc.kind is not self.scheme.phase_kind:
            raise ValueError(
                f"scheme {self.scheme.value} needs a {self.scheme.phase_kind.value} phase condition"
            )
        if self.pc.grid != self.grid:
            raise ValueError("phase condition lives on a different grid")


def make_config(
    scheme: "str | Scheme",
    grid: Grid1D,
    u0: GridFunction,
    cfl_ratio: float = 0.1,
    reference: Optional[GridFunction] = None,
    **kw,
) -> SchemeConfig:
    """Build a config with ``dt = cfl_ratio * dx`` and ``kappa`` from ``u0``.

    ``reference`` is the fixed-phase template and defaults to ``u0``; it is
    ignored by the orthogonal schemes.
    """
    scheme = Scheme.parse(scheme)
    ctx = HyperbolicContext(kappa_from_initial(u0), BoundaryData.from_function(u0))
    if scheme.phase_kind is PhaseKind.FIXED:
        pc = PhaseCondition.fixed(grid, u0 if reference is None else reference)
    else:
        pc = PhaseCondition.orthogonal(grid)
    return SchemeConfig(scheme, cfl_ratio * grid.dx, ctx, pc, grid, **kw)


# -- sub-problem (A) -------------------------------------------------------

def phi_A_be(s: FrozenState, grid: Grid1D, dt: float, bd: BoundaryData) -> FrozenState:
    return FrozenState(backward_euler_step(s.v, grid, dt, bd), s.gamma, s.mu)


def phi_A_cn(s: FrozenState, grid: Grid1D, dt: float, bd: BoundaryData) -> FrozenState:
    return FrozenState(crank_nicolson_step(s.v, grid, dt, bd), s.gamma, s.mu)


# -- sub-problem (B) -------------------------------------------------------

def rs_euler_update(w0: GridFunction, grid: Grid1D, dt: float, ctx: HyperbolicContext, mu: float, rhs0=None):
    """Forward Euler step of ``w_t = RS(w) + mu D0 w`` at a given speed."""
    if rhs0 is None:
        rhs0 = rusanov_rhs(w0, grid, ctx)
    return w0 + dt * rhs0 + dt * mu * central_diff(w0, grid)


def kt_heun_update(w0: GridFunction, grid: Grid1D, dt: float, ctx: HyperbolicContext, mu: float, rhs0=None):
    """Heun step of ``w_t = KT(w) + mu D0 w``; both stages use the same ``mu``."""
    if rhs0 is None:
        rhs0 = kt_rhs(w0, grid, ctx)
    w_star = w0 + dt * rhs0 + dt * mu * central_diff(w0, grid)
    return 0.5 * w0 + 0.5 * (w_star + dt * kt_rhs(w_star, grid, ctx) + dt * mu * central_diff(w_star, grid))


def _constant_state(s: FrozenState, dt: float) -> Optional[FrozenState]:
    # A constant profile is a fixed point of sub-problem B for every speed, so
    # there is no frame speed to solve for. Keep the last one instead of
    # failing on the degenerate phase condition.
    if np.all(s.v == s.v[0]):
        return FrozenState(s.v.copy(), s.gamma + dt * s.mu, s.mu)
    return None


def phi_B_rs_orth(s: FrozenState, grid: Grid1D, dt: float, ctx: HyperbolicContext) -> FrozenState:
    """Forward Euler / Rusanov step with the explicit orthogonal speed.

    ``v`` is advanced with the speed of the old profile; ``gamma`` with the
    speed of the new one.
    """
    if (flat := _constant_state(s, dt)) is not None:
        return flat
    mu_star = orthogonal_speed(s.v, grid)
    w1 = rs_euler_update(s.v, grid, dt, ctx, mu_star)
    mu1 = orthogonal_speed(w1, grid)
    return FrozenState(w1, s.gamma + dt * mu1, mu1)


def phi_B_rs_fixed(
    s: FrozenState, grid: Grid1D, dt: float, ctx: HyperbolicContext, pc: PhaseCondition
) -> FrozenState:
    """Forward Euler / Rusanov step with the half-explicit fixed-phase speed."""
    if (flat := _constant_state(s, dt)) is not None:
        return flat
    rhs0 = rusanov_rhs(s.v, grid, ctx)
    mu1 = fixed_phase_speed(s.v, rhs0, pc, dt)
    w1 = rs_euler_update(s.v, grid, dt, ctx, mu1, rhs0)
    return FrozenState(w1, s.gamma + dt * mu1, mu1)


def phi_B_kt_orth(s: FrozenState, grid: Grid1D, dt: float, ctx: HyperbolicContext) -> FrozenState:
    """Heun / Kurganov-Tadmor step, both stages with the orthogonal speed of ``v``."""
    if (flat := _constant_state(s, dt)) is not None:
        return flat
    mu_star = orthogonal_speed(s.v, grid)
    w1 = kt_heun_update(s.v, grid, dt, ctx, mu_star)
    mu1 = orthogonal_speed(w1, grid)
    return FrozenState(w1, s.gamma + dt * mu1, mu1)


def phi_B_kt_fixed(
    s: FrozenState,
    grid: Grid1D,
    dt: float,
    ctx: HyperbolicContext,
    pc: PhaseCondition,
    dt_in_denominator: bool = True,
) -> FrozenState:
    """Heun / Kurganov-Tadmor step with the fixed-phase speed of the predictor."""
    if (flat := _constant_state(s, dt)) is not None:
        return flat
    rhs0 = kt_rhs(s.v, grid, ctx)
    mu1 = fixed_phase_speed(s.v, rhs0, pc, dt, dt_in_denominator=dt_in_denominator)
    w1 = kt_heun_update(s.v, grid, dt, ctx, mu1, rhs0)
    return FrozenState(w1, s.gamma + dt * mu1, mu1)


# -- compositions ------------------------------------------------------------

def lie_step(s: FrozenState, cfg: SchemeConfig) -> FrozenState:
    """``phi_B(dt) o phi_A(dt)``: heat step first, so the phase condition holds at the end."""
    grid, dt, ctx = cfg.grid, cfg.dt, cfg.ctx
    if cfg.scheme is Scheme.LO:
        return phi_B_rs_orth(phi_A_be(s, grid, dt, ctx.bd), grid, dt, ctx)
    if cfg.scheme is Scheme.LF:
        return phi_B_rs_fixed(phi_A_be(s, grid, dt, ctx.bd), grid, dt, ctx, cfg.pc)
    raise ValueError(f"lie_step does not handle scheme {cfg.scheme.value}")


def strang_step(s: FrozenState, cfg: SchemeConfig) -> FrozenState:
    """``phi_B(dt/2) o phi_A(dt) o phi_B(dt/2)``.

    ``gamma`` collects both half-step increments; ``mu`` is the speed from
    the final half step.
    """
    grid, dt, ctx = cfg.grid, cfg.dt, cfg.ctx
    half = 0.5 * dt
    if cfg.scheme is Scheme.SO:
        s = phi_B_kt_orth(s, grid, half, ctx)
        s = phi_A_cn(s, grid, dt, ctx.bd)
        return phi_B_kt_orth(s, grid, half, ctx)
    if cfg.scheme is Scheme.SF:
        flag = cfg.kt_fixed_dt_in_denominator
        s = phi_B_kt_fixed(s, grid, half, ctx, cfg.pc, flag)
        s = phi_A_cn(s, grid, dt, ctx.bd)
        return phi_B_kt_fixed(s, grid, half, ctx, cfg.pc, flag)
    raise ValueError(f"strang_step does not handle scheme {cfg.scheme.value}")


def step(s: FrozenState, cfg: SchemeConfig) -> FrozenState:
    return strang_step(s, cfg) if cfg.scheme.is_strang else lie_step(s, cfg)
