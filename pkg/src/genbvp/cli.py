"""Command-line entry point.

Usage::

    genbvp analyze problem.json [--grid N] [--rank-tol X] [--out DIR]
    genbvp solve problem.json [--tol-solve X] [--p {1,2,inf}] [--out DIR]
    genbvp continuity family.json [--out DIR]
    genbvp selftest

Exit codes: 0 success, 1 invalid input, 2 numerical failure (or a failed selftest).
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass
from pathlib import Path

from .charmat import characteristic_matrix, fredholm_numbers, is_invertible
from .continuity import run_family, semicontinuity_check, two_sided_estimate_check
from .errors import BVPError, DegenerateFamilyError, InvalidProblemError, SchemaError
from .io import (
    format_number,
    load_family,
    load_problem,
    open_output,
    write_continuity_csv,
    write_matrix_csv,
    write_trajectory_csv,
)
from .model import parse_exponent, validate
from .selftest import run_selftest
from .solver import solve

EXIT_OK, EXIT_INVALID, EXIT_NUMERICAL = 0, 1, 2


@dataclass(frozen=True)
class RunConfig:
    command: str
    input_path: Path | None = None
    grid_steps: int = 2000
    rank_tolerance_override: float | None = None
    p_override: float | None = None
    output_path: Path | None = None
    tol_solve: float = 1e-6

    def problems(self) -> list[str]:
        out = []
        if self.command not in ("analyze", "solve", "continuity", "selftest"):
            out.append(f"unknown command {self.command!r}")
        if self.command != "selftest" and self.input_path is None:
            out.append(f"{self.command} needs an input file")
        if self.grid_steps < 10 or self.grid_steps % 2:
            out.append(f"--grid must be even and >= 10, got {self.grid_steps}")
        if self.tol_solve <= 0:
            out.append("--tol-solve must be positive")
        if self.rank_tolerance_override is not None and self.rank_tolerance_override <= 0:
            out.append("--rank-tol must be positive")
        return out


def _fmt_exp(p) -> str:
    return "inf" if p == math.inf else str(p)


def _emit(lines, out) -> None:
    for key, value in lines:
        print(f"{key}: {value}", file=out)


def _csv(config: RunConfig, name: str, writer, payload, out) -> None:
    fh = open_output(config.output_path, name)
    if fh is None:
        print(f"--- {name}", file=out)
        writer(out, payload)
        return
    with fh:
        writer(fh, payload)


def _settings(config: RunConfig, p) -> list:
    return [
        ("grid_steps", config.grid_steps),
        ("rank_tolerance_override", "none" if config.rank_tolerance_override is None else format_number(config.rank_tolerance_override)),
        ("tol_solve", format_number(config.tol_solve)),
        ("p", _fmt_exp(p)),
    ]


def _matrix_lines(M) -> list:
    return [
        ("rank", M.rank),
        ("rank_tolerance", format_number(M.rank_tolerance)),
        ("singular_values", " ".join(format_number(s) for s in M.singular_values)),
    ]


def _load_problem(config: RunConfig):
    problem = load_problem(config.input_path)
    report = validate(problem)
    if not report.ok:
        raise InvalidProblemError(report.violations)
    return problem


def _analyze(config: RunConfig, out) -> int:
    problem = _load_problem(config)
    grid = problem.grid(config.grid_steps)
    M = characteristic_matrix(problem, grid, config.rank_tolerance_override)
    fred = fredholm_numbers(M, problem.dims)
    d = problem.dims
    _emit(
        [("command", "analyze")]
        + _settings(config, d.p if config.p_override is None else config.p_override)
        + [("dims", f"m={d.m} r={d.r} n={d.n} l={d.l}"),
           ("index", fred.index), ("dim_ker", fred.dim_ker), ("dim_coker", fred.dim_coker),
           ("invertible", is_invertible(M, d))]
        + _matrix_lines(M),
        out,
    )
    _csv(config, "characteristic_matrix.csv", write_matrix_csv, M.data, out)
    return EXIT_OK


def _solve(config: RunConfig, out) -> int:
    problem = _load_problem(config)
    grid = problem.grid(config.grid_steps)
    p = problem.dims.p if config.p_override is None else config.p_override
    rep = solve(problem, grid, config.tol_solve, config.rank_tolerance_override, p)
    _emit(
        [("command", "solve")]
        + _settings(config, p)
        + [("status", rep.status),
           ("index", rep.fredholm.index), ("dim_ker", rep.fredholm.dim_ker), ("dim_coker", rep.fredholm.dim_coker),
           ("consistency_residual", format_number(rep.consistency_residual)),
           ("ode_residual", "n/a" if rep.ode_residual is None else format_number(rep.ode_residual)),
           ("boundary_residual", "n/a" if rep.boundary_residual is None else format_number(rep.boundary_residual)),
           ("within_tolerance", rep.within_tolerance)]
        + _matrix_lines(rep.matrix),
        out,
    )
    if rep.solution is not None:
        _csv(config, "solution.csv", write_trajectory_csv, rep.solution, out)
    return EXIT_OK


def _continuity(config: RunConfig, out) -> int:
    family = load_family(config.input_path)
    grid = family.base.grid(config.grid_steps)
    p = family.base.dims.p if config.p_override is None else config.p_override
    rep = run_family(family, grid, config.tol_solve, config.rank_tolerance_override, p)
    cond = rep.conditions
    try:
        g1, g2, passed = two_sided_estimate_check(rep)
        estimate = [("gamma1", format_number(g1)), ("gamma2", format_number(g2)), ("two_sided_estimate", "pass" if passed else "fail")]
    except DegenerateFamilyError as exc:
        estimate = [("two_sided_estimate", f"degenerate ({exc})")]
    semi = semicontinuity_check(rep, rep.base_fredholm)
    _emit(
        [("command", "continuity")]
        + _settings(config, p)
        + [("schedule", " ".join(format_number(e) for e in rep.schedule)),
           ("condition_0_trivial_kernel", cond.trivial_kernel),
           ("condition_I_coefficients", cond.coefficient_convergence),
           ("condition_II_boundary", cond.boundary_convergence),
           ("base_status", rep.base_status),
           ("base_dim_ker", rep.base_fredholm.dim_ker), ("base_dim_coker", rep.base_fredholm.dim_coker),
           ("index", rep.index),
           ("semicontinuity", "pass" if all(semi.values()) else "fail")]
        + estimate,
        out,
    )
    _csv(config, "continuity.csv", write_continuity_csv, rep, out)
    return EXIT_OK


def _selftest(config: RunConfig, out) -> int:
    results = run_selftest()
    for res in results:
        print(f"{'PASS' if res.passed else 'FAIL'} {res.name}: {res.detail}", file=out)
    return EXIT_OK if all(r.passed for r in results) else EXIT_NUMERICAL


COMMANDS = {"analyze": _analyze, "solve": _solve, "continuity": _continuity, "selftest": _selftest}


def run(config: RunConfig, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    issues = config.problems()
    if issues:
        print("error: " + "; ".join(issues), file=err)
        return EXIT_INVALID
    try:
        return COMMANDS[config.command](config, out)
    except (SchemaError, InvalidProblemError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_INVALID
    except ValueError as exc:
        if isinstance(exc, BVPError):
            print(f"numerical failure: {exc}", file=err)
            return EXIT_NUMERICAL
        print(f"error: {exc}", file=err)
        return EXIT_INVALID
    except BVPError as exc:
        print(f"numerical failure: {exc}", file=err)
        return EXIT_NUMERICAL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="genbvp", description=__doc__.split("\n")[0])
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("input", nargs="?", type=Path)
    parser.add_argument("--grid", type=int, default=2000, help="number of grid steps (even, default 2000)")
    parser.add_argument("--rank-tol", type=float, default=None, help="singular value threshold for numerical rank")
    parser.add_argument("--tol-solve", type=float, default=1e-6)
    parser.add_argument("--out", type=Path, default=None, help="directory for CSV outputs")
    parser.add_argument("--p", default=None, help="Lebesgue exponent for reported norms: 1, 2 or inf")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        p = None if args.p is None else parse_exponent(args.p)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    config = RunConfig(
        command=args.command,
        input_path=args.input,
        grid_steps=args.grid,
        rank_tolerance_override=args.rank_tol,
        p_override=p,
        output_path=args.out,
        tol_solve=args.tol_solve,
    )
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
