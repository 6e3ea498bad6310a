"""Closed-form traveling waves of the viscous Burgers equation

    u_t + (u^2 / 2)_x = u_xx

connecting a left state ``b`` to a right state ``c < b``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import Grid1D, GridFunction


@dataclass(frozen=True)
class WaveParams:
    b: float = 1.5
    c: float = -0.5

    def __post_init__(self) -> None:
        if not (np.isfinite(self.b) and np.isfinite(self.c)):
            raise ValueError("asymptotic states must be finite")
        if not self.b > self.c:
            raise ValueError(f"need b > c for a decreasing front, got b={self.b}, c={self.c}")

    @property
    def a(self) -> float:
        """Amplitude ``(b - c) / 2``."""
        return 0.5 * (self.b - self.c)

    @property
    def mu_bar(self) -> float:
        """Wave speed ``(b + c) / 2``."""
        return 0.5 * (self.b + self.c)


def front_shape(xi, a: float):
    """``a (1 - e^{a xi}) / (1 + e^{a xi})``, evaluated as ``-a tanh(a xi / 2)``.

    The two expressions are identical; the tanh form saturates at ``-a`` and
    ``+a`` without overflowing for large ``|a xi|``.
    """
    return -a * np.tanh(0.5 * a * np.asarray(xi, dtype=float))


def traveling_wave(x, t, p: WaveParams):
    """Exact solution ``phi(x - mu_bar t) + (b + c) / 2``."""
    xi = np.asarray(x, dtype=float) - p.mu_bar * t
    out = front_shape(xi, p.a) + p.mu_bar
    return float(out) if out.ndim == 0 else out


def profile_on_grid(grid: Grid1D, p: WaveParams) -> GridFunction:
    """The wave profile at ``t = 0`` sampled on every node."""
    return grid.sample(lambda x: traveling_wave(x, 0.0, p))


def rough_reference(grid: Grid1D, p: WaveParams, ramp_halfwidth: float = 2.0) -> GridFunction:
    """Piecewise-linear front: ``b`` left of ``-h``, ``c`` right of ``+h``, linear between."""
    h = float(ramp_halfwidth)
    if not 0.0 < h < min(abs(grid.l_minus), abs(grid.l_plus)):
        raise ValueError(
            f"ramp_halfwidth must lie in (0, {min(abs(grid.l_minus), abs(grid.l_plus))}), got {h}"
        )
    return grid.sample(lambda x: np.interp(x, [-h, h], [p.b, p.c]))
