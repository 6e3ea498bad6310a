"""Command-line benchmark harness.

    freezewave simulate --scheme lf --cells 300 --cfl-ratio 0.1
    freezewave converge --scheme sf --cells 75,150,300,600
    freezewave profile-error --scheme lo --out results/lo300_

Exit codes: 0 success, 1 usage error, 2 numerical failure, 3 I/O error.
"""
from __future__ import annotations

import argparse
import csv
import logging
import math
import sys
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .driver import (
    ConvergenceTable,
    DivergenceError,
    FitError,
    RunReport,
    convergence_study,
    error_profile,
    run_to_steady,
)
from .exact import WaveParams, profile_on_grid, rough_reference
from .grid import Grid1D, GridFunction, make_grid
from .phase import DegeneratePhase
from .splitting import FrozenState, Scheme, make_config

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC, EXIT_IO = 0, 1, 2, 3

COMMANDS = ("simulate", "converge", "profile-error")
SCHEMES = ("lo", "lf", "so", "sf")
SHAPES = ("exact", "rough")

log = logging.getLogger("freezewave")


class UsageError(Exception):
    pass


def fmt(x: float) -> str:
    return format(float(x), ".17g")


@dataclass(frozen=True)
class CliConfig:
    command: str
    scheme: str = "lf"
    cells: tuple[int, ...] = (300,)
    cfl_ratio: float = 0.1
    b: float = 1.5
    c: float = -0.5
    domain: tuple[float, float] = (-15.0, 15.0)
    tmax: float = 300.0
    tol: float = 1e-11
    init: str = "exact"
    reference: str = "exact"
    ramp_halfwidth: float = 2.0
    out: str = ""

    @property
    def n_cells(self) -> int:
        return self.cells[0]

    @property
    def params(self) -> WaveParams:
        return WaveParams(self.b, self.c)

    def validate(self) -> "CliConfig":
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if self.scheme not in SCHEMES:
            raise UsageError(f"invalid scheme {self.scheme!r}; choose from {', '.join(SCHEMES)}")
        if self.init not in SHAPES or self.reference not in SHAPES:
            raise UsageError("--init and --reference take 'exact' or 'rough'")
        if self.reference == "rough" and self.scheme in ("lo", "so"):
            raise UsageError("--reference applies only to the fixed-phase schemes lf and sf")
        if not self.cells or any(n < 4 for n in self.cells):
            raise UsageError("--cells needs integers >= 4")
        if self.command != "converge" and len(self.cells) != 1:
            raise UsageError(f"{self.command} takes a single --cells value")
        if self.command == "converge" and len(set(self.cells)) < 2:
            raise UsageError("converge needs at least two distinct --cells values")
        for name in ("cfl_ratio", "tmax", "tol", "ramp_halfwidth"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0.0):
                raise UsageError(f"--{name.replace('_', '-')} must be positive and finite")
        if not (math.isfinite(self.b) and math.isfinite(self.c) and self.b > self.c):
            raise UsageError("need finite --b > --c")
        lo, hi = self.domain
        if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
            raise UsageError("--domain needs LEFT < RIGHT")
        if self.init == "rough" or self.reference == "rough":
            if not self.ramp_halfwidth < min(abs(lo), abs(hi)):
                raise UsageError("--ramp-halfwidth must fit inside the domain")
        return self

    def to_config_text(self) -> str:
        """Render the config-file form (everything except the command)."""
        lines = []
        for f in fields(self):
            if f.name == "command":
                continue
            value = getattr(self, f.name)
            if isinstance(value, tuple):
                value = ",".join(fmt(v) if isinstance(v, float) else str(v) for v in value)
            elif isinstance(value, float):
                value = fmt(value)
            lines.append(f"{f.name.replace('_', '-')} = {value}")
        return "\n".join(lines) + "\n"


# -- parsing -----------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"malformed integer list {text!r}") from None


def _real(text: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"malformed number {text!r}") from None


def _domain(text: str) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"domain must be LEFT,RIGHT, got {text!r}")
    return _real(parts[0]), _real(parts[1])


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="freezewave", description="Freezing-method splitting schemes for viscous Burgers waves.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", type=Path, help="key = value file; flags override it")
        p.add_argument("--scheme", type=str.lower, default="lf")
        p.add_argument("--cells", type=_int_list, default=(300,), help="one value, or a comma list for converge")
        p.add_argument("--cfl-ratio", type=_real, default=0.1, help="dt = cfl_ratio * dx")
        p.add_argument("--b", type=_real, default=1.5, help="left state")
        p.add_argument("--c", type=_real, default=-0.5, help="right state")
        p.add_argument("--domain", type=_domain, default=(-15.0, 15.0), metavar="LEFT,RIGHT")
        p.add_argument("--tmax", type=_real, default=300.0)
        p.add_argument("--tol", type=_real, default=1e-11)
        p.add_argument("--init", type=str.lower, default="exact")
        p.add_argument("--reference", type=str.lower, default="exact")
        p.add_argument("--ramp-halfwidth", type=_real, default=2.0)
        p.add_argument("--out", type=str, default="", help="output path prefix")
        if name == "converge":
            p.add_argument("--workers", type=int, default=1)
    return parser


CONFIG_KEYS = {
    "scheme", "cells", "cfl-ratio", "b", "c", "domain", "tmax", "tol",
    "init", "reference", "ramp-halfwidth", "out",
}


def read_config_file(path: Path) -> list[str]:
    """Turn a ``key = value`` file into the equivalent flag list."""
    argv: list[str] = []
    for lineno, raw in enumerate(path.read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip().replace("_", "-")
        if not sep or key not in CONFIG_KEYS:
            raise UsageError(f"{path}:{lineno}: expected 'key = value' with a known key, got {raw!r}")
        argv.append(f"--{key}={value.strip()}")
    return argv


def parse_args(argv: Sequence[str]) -> tuple[CliConfig, argparse.Namespace]:
    parser = build_parser()
    argv = list(argv)
    ns = parser.parse_args(argv)
    if ns.config is not None:
        try:
            file_argv = read_config_file(ns.config)
        except OSError as exc:
            raise UsageError(f"cannot read config file: {exc}") from exc
        # file flags go right after the command so explicit flags win
        idx = argv.index(ns.command)
        ns = parser.parse_args(argv[: idx + 1] + file_argv + argv[idx + 1 :])
    cfg = CliConfig(
        command=ns.command,
        scheme=ns.scheme,
        cells=tuple(ns.cells),
        cfl_ratio=ns.cfl_ratio,
        b=ns.b,
        c=ns.c,
        domain=tuple(ns.domain),
        tmax=ns.tmax,
        tol=ns.tol,
        init=ns.init,
        reference=ns.reference,
        ramp_halfwidth=ns.ramp_halfwidth,
        out=ns.out,
    )
    return cfg.validate(), ns


# -- CSV output ----------------------------------------------------------------

def _open_csv(path: Path):
    path = Path(path)
    if path.parent != Path(""):
        path.parent.mkdir(parents=True, exist_ok=True)
    return path.open("w", newline="")


def emit_residuals(report: RunReport, path: Path) -> None:
    with _open_csv(path) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["time", "residual", "mu", "gamma"])
        for row in zip(report.times, report.residuals, report.speeds, report.gammas):
            w.writerow([fmt(v) for v in row])


def emit_convergence(table: ConvergenceTable, path: Path) -> None:
    with _open_csv(path) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["n_cells", "dx", "dt", "steady_error", "mu_error", "steady"])
        for r in table.rows:
            w.writerow([r.n_cells, fmt(r.dx), fmt(r.dt), fmt(r.steady_error), fmt(r.mu_error), int(r.steady)])
        if table.rows:
            fh.write(f"# fitted_order = {fmt(table.fitted_order)}\n")


def emit_profile(state: FrozenState, exact: GridFunction, grid: Grid1D, path: Path) -> None:
    with _open_csv(path) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["x", "v", "exact", "abs_error"])
        for x, v, e in zip(grid.nodes, state.v, exact):
            w.writerow([fmt(x), fmt(v), fmt(e), fmt(abs(v - e))])


# -- commands ------------------------------------------------------------------

def _initial_data(cfg: CliConfig) -> tuple[Grid1D, GridFunction, GridFunction, GridFunction]:
    grid = make_grid(cfg.domain[0], cfg.domain[1], cfg.n_cells)
    exact = profile_on_grid(grid, cfg.params)
    rough = rough_reference(grid, cfg.params, cfg.ramp_halfwidth) if "rough" in (cfg.init, cfg.reference) else None
    u0 = exact if cfg.init == "exact" else rough
    vhat = exact if cfg.reference == "exact" else rough
    return grid, u0, vhat, exact


def _run_single(cfg: CliConfig) -> tuple[RunReport, Grid1D, GridFunction]:
    grid, u0, vhat, exact = _initial_data(cfg)
    scfg = make_config(cfg.scheme, grid, u0, cfg.cfl_ratio, reference=vhat)
    report = run_to_steady(scfg, u0, cfg.tol, cfg.tmax, exact=cfg.params)
    state = report.final_state
    status = f"steady at t = {report.steady_time:.4f}" if report.steady else f"not steady by t = {cfg.tmax}"
    print(f"{cfg.scheme.upper()} n_cells={cfg.n_cells} dt={scfg.dt:.6g}: {status}")
    print(f"  last residual = {report.residuals[-1]:.3e}, mu = {state.mu:.12f}, gamma = {state.gamma:.6f}")
    print(f"  L2 error to exact profile = {report.steady_error:.6e}")
    return report, grid, exact


def cmd_simulate(cfg: CliConfig) -> None:
    report, _, _ = _run_single(cfg)
    path = Path(f"{cfg.out}residuals.csv")
    emit_residuals(report, path)
    print(f"  wrote {path}")


def cmd_profile_error(cfg: CliConfig) -> None:
    report, grid, exact = _run_single(cfg)
    path = Path(f"{cfg.out}profile.csv")
    emit_profile(report.final_state, exact, grid, path)
    err = error_profile(report.final_state, grid, cfg.params)
    print(f"  max |error| = {err.max():.3e} at x = {grid.nodes[np.argmax(err)]:.4f}")
    print(f"  wrote {path}")


def cmd_converge(cfg: CliConfig, workers: int = 1) -> None:
    if cfg.init != "exact" or cfg.reference != "exact":
        log.warning("converge always starts from the exact profile; --init/--reference ignored")
    table = convergence_study(
        cfg.scheme, cfg.cells, cfg.params, cfg.cfl_ratio, cfg.tol, cfg.tmax,
        domain=cfg.domain, max_workers=workers,
    )
    print(f"{cfg.scheme.upper()} convergence study")
    print(f"  {'n_cells':>8} {'dx':>10} {'steady_error':>14} {'mu_error':>12} steady")
    for r in table.rows:
        print(f"  {r.n_cells:>8d} {r.dx:>10.5g} {r.steady_error:>14.6e} {r.mu_error:>12.4e} {r.steady}")
    print(f"  fitted order = {table.fitted_order:.4f}")
    path = Path(f"{cfg.out}convergence.csv")
    emit_convergence(table, path)
    print(f"  wrote {path}")


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        cfg, ns = parse_args(argv)
    except UsageError as exc:
        build_parser().print_usage(sys.stderr)
        print(f"freezewave: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if not exc.code else EXIT_USAGE
    logging.basicConfig(level=logging.DEBUG if ns.verbose else logging.INFO, format="%(levelname)s %(message)s")
    try:
        if cfg.command == "simulate":
            cmd_simulate(cfg)
        elif cfg.command == "profile-error":
            cmd_profile_error(cfg)
        else:
            cmd_converge(cfg, ns.workers)
    except (DegeneratePhase, DivergenceError, FitError, FloatingPointError) as exc:
        print(f"freezewave: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        # invalid combinations that only surface when building the scheme (e.g. CFL)
        print(f"freezewave: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"freezewave: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK
