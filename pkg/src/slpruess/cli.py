"""Command-line front end.

Subcommands::

    slpruess solve       --case 1 --method up --k 128 --n 25
    slpruess approx      --case 2 --method ax --k 16 --out curves.csv
    slpruess mesh        --case 1 --method ap --k 16
    slpruess slope-table --out table.csv

Exit status is 0 on success, 2 for configuration errors and 3 for solver
failures.
"""

from __future__ import annotations

import argparse
import csv
import io
import logging
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .exceptions import PoleError, SolverError
from .fitting import build_slope_table, fit_segments, model_on_grid
from .mesh import Mesh, adaptive_mesh, mesh_penalties, uniform_mesh
from .potentials import PotentialSpec, builtin, read_table
from .solver import BoundaryConditions, Problem, SolverConfig, find_eigenvalues

log = logging.getLogger("slpruess")

EXIT_CONFIG = 2
EXIT_SOLVER = 3

# method code -> (adaptive, fit method, penalty kind, label)
METHODS = {
    "up": (False, "pruess", "constant", "U-P"),
    "ux": (False, "extended", "linear", "U-X"),
    "ap": (True, "pruess", "constant", "A-P"),
    "ax": (True, "extended", "linear", "A-X"),
}

CSV_HEADER = ("case", "method", "K", "index", "lambda")


class ConfigError(ValueError):
    pass


class StageError(RuntimeError):
    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"{stage} stage failed: {cause}")
        self.stage = stage


@dataclass
class RunConfig:
    case: str | None = None
    table: str | None = None
    method: str = "up"
    K: int = 16
    num_eigen: int = 25
    tol: float = 1e-10
    lambda_min: float | None = None
    initial_step: float | None = None
    max_lambda: float | None = None
    bc: tuple[float, float, float, float] = (1.0, 0.0, 1.0, 0.0)
    out: str | None = None
    fmt: str = "csv"
    paper_digits: bool = False
    samples: int = 1024
    mesh_out: str | None = None

    @property
    def label(self) -> str:
        return METHODS[self.method][3]


def load_potential(config: RunConfig) -> PotentialSpec:
    if (config.case is None) == (config.table is None):
        raise ConfigError("give exactly one of --case or --table")
    if config.case is not None:
        return builtin(config.case)
    return read_table(config.table)


def _validate(config: RunConfig):
    if config.method not in METHODS:
        raise ConfigError(f"unknown method {config.method!r}; choose from {sorted(METHODS)}")
    adaptive = METHODS[config.method][0]
    if config.K < (2 if adaptive else 1):
        raise ConfigError(f"K={config.K} is too small for method {config.method}")
    if config.num_eigen < 1:
        raise ConfigError("--n must be >= 1")
    if not config.tol > 0:
        raise ConfigError("--tol must be positive")
    if config.fmt not in ("csv", "md"):
        raise ConfigError("--format must be csv or md")


def build(config: RunConfig):
    """Potential, mesh and problem for a configuration."""
    try:
        _validate(config)
        p = load_potential(config)
        bc = BoundaryConditions(*config.bc)
    except (ValueError, OSError) as exc:
        raise ConfigError(str(exc)) from exc
    adaptive, fit, kind, _ = METHODS[config.method]
    try:
        mesh = adaptive_mesh(p, config.K, kind) if adaptive else uniform_mesh(config.K)
    except (ValueError, ArithmeticError) as exc:
        raise StageError("mesh", exc) from exc
    try:
        problem = Problem(fit_segments(p, mesh, fit), bc, fit, p, mesh)
    except (ValueError, ArithmeticError) as exc:
        raise StageError("fit", exc) from exc
    return p, mesh, problem


def run(config: RunConfig) -> list[tuple]:
    """Eigenvalue rows ``(case, method, K, index, lambda)``."""
    p, _, problem = build(config)
    solver_cfg = SolverConfig(
        tol=config.tol,
        lambda_min=config.lambda_min,
        initial_step=config.initial_step,
        max_lambda=config.max_lambda,
    )
    try:
        results = find_eigenvalues(problem, config.num_eigen, solver_cfg)
    except (SolverError, PoleError) as exc:
        raise StageError("solve", exc) from exc
    return [(p.id, config.label, config.K, r.index, r.lam) for r in results]


def format_rows(rows, fmt: str = "csv", paper_digits: bool = False) -> str:
    def lam_str(v):
        return f"{v:.4e}" if paper_digits else f"{v:.10g}"

    cells = [[str(c), m, str(k), str(i), lam_str(v)] for c, m, k, i, v in rows]
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        writer.writerows(cells)
        return buf.getvalue()
    widths = [max(len(h), *(len(r[j]) for r in cells)) for j, h in enumerate(CSV_HEADER)]

    def line(vals):
        return "| " + " | ".join(v.rjust(w) for v, w in zip(vals, widths)) + " |"

    sep = "|" + "|".join("-" * (w + 1) + ":" for w in widths) + "|"
    return "\n".join([line(CSV_HEADER), sep] + [line(r) for r in cells]) + "\n"


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([v if isinstance(v, str) else f"{v:.17g}" if isinstance(v, float) else v
                         for v in row])
    return buf.getvalue()


def dump_approximation(config: RunConfig) -> tuple[str, str]:
    """CSV of ``x, p(x), model(x)`` on a uniform grid, and the mesh breakpoints."""
    if config.samples < 512:
        raise ConfigError("--samples must be at least 512")
    p, mesh, problem = build(config)
    x = np.linspace(0.0, 1.0, config.samples)
    px = np.asarray(p(x), dtype=float)
    model = model_on_grid(problem.segments, x)
    curves = _csv_text(("x", "p", "model"), zip(x.tolist(), px.tolist(), model.tolist()))
    return curves, _csv_text(("k", "x"), enumerate(mesh.points.tolist()))


def dump_mesh(config: RunConfig) -> str:
    p, mesh, _ = build(config)
    kind = METHODS[config.method][2]
    pen = mesh_penalties(p, mesh, kind)
    pts = mesh.points.tolist()
    rows = [(k, pts[k], pts[k + 1], float(pen[k])) for k in range(mesh.K)]
    return _csv_text(("k", "left", "right", "penalty"), rows)


def dump_slope_table() -> str:
    table = build_slope_table()
    return _csv_text(("u", "t", "qprime"),
                     zip(table.u.tolist(), table.t.tolist(), table.slopes.tolist()))


def _parse_bc(text: str):
    try:
        vals = tuple(float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad boundary conditions {text!r}") from None
    if len(vals) != 4:
        raise argparse.ArgumentTypeError("--bc needs four numbers a0,a1,b0,b1")
    return vals


def make_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    src = common.add_mutually_exclusive_group()
    src.add_argument("--case", help="benchmark potential 1-5")
    src.add_argument("--table", help="two-column CSV x,p of a tabulated potential")
    common.add_argument("--method", default="up", choices=sorted(METHODS),
                        help="up/ux: uniform Pruess/extended, ap/ax: adaptive (default up)")
    common.add_argument("--k", dest="K", type=int, default=16, help="number of subintervals")
    common.add_argument("--n", dest="num_eigen", type=int, default=25, help="eigenvalues to compute")
    common.add_argument("--tol", type=float, default=1e-10, help="relative bisection tolerance")
    common.add_argument("--lambda-min", type=float, help="scan start (default: below the potential)")
    common.add_argument("--step", dest="initial_step", type=float, help="initial scan step")
    common.add_argument("--lambda-max", dest="max_lambda", type=float, help="scan ceiling")
    common.add_argument("--bc", type=_parse_bc, default=(1.0, 0.0, 1.0, 0.0),
                        help="a0,a1,b0,b1 for a0 y(0)+a1 y'(0)=0, b0 y(1)+b1 y'(1)=0 (default Dirichlet)")
    common.add_argument("--out", help="output file (default stdout)")
    common.add_argument("--format", dest="fmt", default="csv", choices=("csv", "md"))
    common.add_argument("--paper-digits", action="store_true",
                        help="round eigenvalues to 5 significant digits")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="slpruess", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("solve", parents=[common], help="compute eigenvalues")
    approx = sub.add_parser("approx", parents=[common], help="dump p(x) and the fitted model")
    approx.add_argument("--samples", type=int, default=1024)
    approx.add_argument("--mesh-out", help="breakpoint file (default: <out>.mesh.csv)")
    sub.add_parser("mesh", parents=[common], help="dump breakpoints and segment penalties")
    sub.add_parser("slope-table", parents=[common], help="dump the slope lookup table")
    return parser


def _emit(text: str, path: str | None):
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")
    fields = {k: v for k, v in vars(args).items() if k in RunConfig.__dataclass_fields__}
    config = RunConfig(**fields)
    try:
        if args.command == "solve":
            rows = run(config)
            _emit(format_rows(rows, config.fmt, config.paper_digits), config.out)
        elif args.command == "approx":
            curves, breakpoints = dump_approximation(config)
            _emit(curves, config.out)
            mesh_path = config.mesh_out
            if mesh_path is None and config.out is not None:
                out = Path(config.out)
                mesh_path = str(out.with_name(out.stem + ".mesh.csv"))
            if mesh_path is not None:
                _emit(breakpoints, mesh_path)
        elif args.command == "mesh":
            _emit(dump_mesh(config), config.out)
        else:
            _emit(dump_slope_table(), config.out)
    except ConfigError as exc:
        print(f"slpruess: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except StageError as exc:
        print(f"slpruess: solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except OSError as exc:
        print(f"slpruess: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return 0


if __name__ == "__main__":
    sys.exit(main())
