"""Long-time runs to a numerical steady state and convergence studies."""
from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from .exact import WaveParams, profile_on_grid, traveling_wave
from .grid import Grid1D, GridFunction, check_grid_function, l2_norm, make_grid
from .phase import DegeneratePhase
from .splitting import FrozenState, Scheme, SchemeConfig, make_config, step

log = logging.getLogger(__name__)

DEFAULT_TOL = 1e-11
DEFAULT_T_MAX = 300.0
DEFAULT_DOMAIN = (-15.0, 15.0)


class DivergenceError(FloatingPointError):
    """The state became non-finite during a run."""

    def __init__(self, msg: str, time: float):
        super().__init__(f"{msg} at t = {time:.6g}")
        self.time = time


class PhaseFailure(DegeneratePhase):
    """A ``DegeneratePhase`` raised inside a run, tagged with its time stamp."""

    def __init__(self, msg: str, time: float):
        super().__init__(f"{msg} at t = {time:.6g}")
        self.time = time


class FitError(ValueError):
    """Too few distinct steady rows for an order fit."""


@dataclass(eq=False)
class RunReport:
    """Histories of a run; the i-th entry of each belongs to ``times[i] = n_i dt``."""

    times: np.ndarray
    residuals: np.ndarray
    speeds: np.ndarray
    gammas: np.ndarray
    final_state: FrozenState
    grid: Grid1D
    dt: float
    n_steps: int
    steady: bool
    steady_time: Optional[float] = None
    steady_error: Optional[float] = None

    @property
    def residual_history(self) -> list[tuple[float, float]]:
        return list(zip(self.times.tolist(), self.residuals.tolist()))

    @property
    def speed_history(self) -> list[tuple[float, float]]:
        return list(zip(self.times.tolist(), self.speeds.tolist()))

    @property
    def gamma_history(self) -> list[tuple[float, float]]:
        return list(zip(self.times.tolist(), self.gammas.tolist()))


def default_record_every(n_cells: int) -> int:
    return 1 if n_cells <= 600 else 10


def run_to_steady(
    cfg: SchemeConfig,
    v0: GridFunction,
    tol: float = DEFAULT_TOL,
    t_max: float = DEFAULT_T_MAX,
    record_every: Optional[int] = None,
    exact: Optional[WaveParams] = None,
    on_step: Optional[Callable[[int, FrozenState], None]] = None,
) -> RunReport:
    """Iterate the configured scheme from ``(v0, 0, 0)`` until the step residual
    ``||v^{n+1} - v^n||`` drops to ``tol`` or the time reaches ``t_max``.

    The step that reaches the tolerance is always recorded. If ``exact`` is
    given, the report's ``steady_error`` is filled in. ``on_step(n, state)``
    is called after every step.
    """
    if not tol > 0.0:
        raise ValueError(f"tol must be positive, got {tol}")
    if not t_max > 0.0:
        raise ValueError(f"t_max must be positive, got {t_max}")
    grid, dt = cfg.grid, cfg.dt
    v0 = check_grid_function(v0, grid)
    if v0[0] != cfg.ctx.bd.left or v0[-1] != cfg.ctx.bd.right:
        raise ValueError("initial boundary entries differ from the pinned boundary data")
    if record_every is None:
        record_every = default_record_every(grid.n_cells)
    n_max = int(np.ceil(t_max / dt - 1e-9))

    state = FrozenState(np.array(v0, dtype=float), 0.0, 0.0)
    rec_n, rec_r, rec_mu, rec_g = [], [], [], []
    steady = False
    n = 0
    for n in range(1, n_max + 1):
        try:
            new = step(state, cfg)
        except DegeneratePhase as exc:
            raise PhaseFailure(str(exc), n * dt) from exc
        if not (np.all(np.isfinite(new.v)) and np.isfinite(new.mu) and np.isfinite(new.gamma)):
            raise DivergenceError("non-finite state", n * dt)
        res = l2_norm(new.v - state.v, grid)
        state = new
        if on_step is not None:
            on_step(n, state)
        steady = res <= tol
        if n % record_every == 0 or steady or n == n_max:
            rec_n.append(n)
            rec_r.append(res)
            rec_mu.append(state.mu)
            rec_g.append(state.gamma)
        if steady:
            break

    log.debug("%s n=%d: %s after %d steps", cfg.scheme.value, grid.n_cells,
              "steady" if steady else "not steady", n)
    report = RunReport(
        times=np.asarray(rec_n, dtype=float) * dt,
        residuals=np.asarray(rec_r),
        speeds=np.asarray(rec_mu),
        gammas=np.asarray(rec_g),
        final_state=state,
        grid=grid,
        dt=dt,
        n_steps=n,
        steady=steady,
        steady_time=n * dt if steady else None,
    )
    if exact is not None:
        report.steady_error = steady_error(state, grid, exact)
    return report


def steady_error(final: FrozenState, grid: Grid1D, p: WaveParams) -> float:
    """Discrete L2 distance of ``final.v`` to the unshifted exact profile."""
    return l2_norm(final.v - profile_on_grid(grid, p), grid)


def shifted_steady_error(final: FrozenState, grid: Grid1D, p: WaveParams, max_shift: float = 5.0) -> tuple[float, float]:
    """Diagnostic: smallest L2 distance over translates of the exact profile.

    Returns ``(error, shift)``.
    """
    def dist(shift: float) -> float:
        return l2_norm(final.v - traveling_wave(grid.nodes - shift, 0.0, p), grid)

    res = minimize_scalar(dist, bounds=(-max_shift, max_shift), method="bounded",
                          options={"xatol": 1e-10})
    return float(res.fun), float(res.x)


def error_profile(final: FrozenState, grid: Grid1D, p: WaveParams) -> GridFunction:
    """Pointwise ``|v - exact|`` at every node."""
    return np.abs(final.v - profile_on_grid(grid, p))


@dataclass(frozen=True)
class ConvergenceRow:
    n_cells: int
    dx: float
    dt: float
    steady_error: float
    mu_error: float
    steady: bool
    steady_time: Optional[float] = None
    max_error: float = float("nan")
    boundary_max_error: float = float("nan")


@dataclass
class ConvergenceTable:
    scheme: Scheme
    rows: list[ConvergenceRow] = field(default_factory=list)
    fitted_order: float = float("nan")
    mu_fitted_order: float = float("nan")


def fit_order(dx: Sequence[float], err: Sequence[float]) -> float:
    """Least-squares slope of ``log err`` against ``log dx``."""
    dx = np.asarray(dx, dtype=float)
    err = np.asarray(err, dtype=float)
    if dx.size < 2 or np.unique(dx).size < 2:
        raise FitError("need at least two distinct resolutions for an order fit")
    if np.any(err <= 0.0) or np.any(dx <= 0.0):
        raise FitError("errors and spacings must be positive for a log-log fit")
    slope, _ = np.polyfit(np.log(dx), np.log(err), 1)
    return float(slope)


def _study_row(args) -> tuple[ConvergenceRow, RunReport]:
    scheme, n_cells, p, cfl_ratio, tol, t_max, domain, boundary_band = args
    grid = make_grid(domain[0], domain[1], n_cells)
    u0 = profile_on_grid(grid, p)
    cfg = make_config(scheme, grid, u0, cfl_ratio)
    rep = run_to_steady(cfg, u0, tol, t_max, exact=p)
    err = error_profile(rep.final_state, grid, p)
    far = np.abs(grid.nodes) >= boundary_band
    row = ConvergenceRow(
        n_cells=n_cells,
        dx=grid.dx,
        dt=cfg.dt,
        steady_error=rep.steady_error,
        mu_error=abs(rep.final_state.mu - p.mu_bar),
        steady=rep.steady,
        steady_time=rep.steady_time,
        max_error=float(err.max()),
        boundary_max_error=float(err[far].max()) if far.any() else 0.0,
    )
    return row, rep


def convergence_study(
    scheme: "str | Scheme",
    resolutions: Sequence[int],
    p: WaveParams = WaveParams(),
    cfl_ratio: float = 0.1,
    tol: float = DEFAULT_TOL,
    t_max: float = DEFAULT_T_MAX,
    domain: tuple[float, float] = DEFAULT_DOMAIN,
    max_workers: Optional[int] = None,
    boundary_band: float = 12.0,
) -> ConvergenceTable:
    """Run every resolution to steady state from the exact profile and fit
    the order of the steady-state error in ``dx``.

    Rows that never became steady are kept but left out of the fit. The
    speed error ``|mu - mu_bar|`` is fitted too when all its values are
    positive. ``boundary_band`` sets the ``|x|`` beyond which
    ``boundary_max_error`` is taken. Runs go to a process pool when
    ``max_workers > 1``.
    """
    scheme = Scheme.parse(scheme)
    resolutions = [int(n) for n in resolutions]
    if len(resolutions) < 2 or len(set(resolutions)) < 2:
        raise FitError("need at least two distinct resolutions")
    jobs = [(scheme, n, p, cfl_ratio, tol, t_max, domain, boundary_band) for n in resolutions]
    if max_workers and max_workers > 1:
        with ProcessPoolExecutor(max_workers=max_workers) as pool:
            results = list(pool.map(_study_row, jobs))
    else:
        results = [_study_row(j) for j in jobs]

    rows = sorted((r for r, _ in results), key=lambda r: -r.dx)
    table = ConvergenceTable(scheme, rows)
    good = [r for r in rows if r.steady]
    if len(good) < 2:
        raise FitError(f"only {len(good)} resolution(s) reached a steady state")
    table.fitted_order = fit_order([r.dx for r in good], [r.steady_error for r in good])
    if all(r.mu_error > 0.0 for r in good):
        table.mu_fitted_order = fit_order([r.dx for r in good], [r.mu_error for r in good])
    return table
