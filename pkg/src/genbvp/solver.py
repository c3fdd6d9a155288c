"""Shooting solver: ``y = y_part + sum_k Y_k xi_k`` with ``M xi = c - B y_part``."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .charmat import (
    CharacteristicMatrix,
    FredholmNumbers,
    characteristic_matrix,
    fredholm_numbers,
)
from .errors import InvalidProblemError
from .model import BVProblem, apply_boundary_operator, sobolev_norm, validate
from .odeint import apply_differential_operator, extend_derivatives, fundamental_solutions, integrate
from .trajectory import Grid, Trajectory

__all__ = ["SolveReport", "solve", "residual_check", "UNIQUE", "NON_UNIQUE", "NO_SOLUTION"]

UNIQUE = "unique"
NON_UNIQUE = "solvable_non_unique"
NO_SOLUTION = "no_solution"

DEFAULT_TOL_SOLVE = 1e-6
CONSISTENCY_RTOL = 1e-8


@dataclass(frozen=True, eq=False)
class SolveReport:
    status: str
    solution: Trajectory | None
    kernel_basis: tuple
    ode_residual: float | None
    boundary_residual: float | None
    fredholm: FredholmNumbers
    matrix: CharacteristicMatrix
    coefficients: np.ndarray | None
    consistency_residual: float
    tol_solve: float

    @property
    def solvable(self) -> bool:
        return self.status != NO_SOLUTION

    @property
    def within_tolerance(self) -> bool:
        if self.solution is None:
            return True
        return self.ode_residual <= self.tol_solve and self.boundary_residual <= self.tol_solve


def residual_check(problem: BVProblem, y: Trajectory, p=None) -> tuple[float, float]:
    """``(||L y - f||_{n,p}, |B y - c|)`` for a candidate carrying ``n + r`` derivatives."""
    dims = problem.dims
    p = dims.p if p is None else p
    y.require(dims.jet_count)
    Ly = apply_differential_operator(problem.coefficients, y, dims.n)
    f = Trajectory.from_function(problem.rhs, y.grid, dims.n)
    ode = sobolev_norm(Ly - f, dims.n, p)
    bnd = float(np.linalg.norm(apply_boundary_operator(problem.boundary, y) - problem.c))
    return ode, bnd


def particular_solution(problem: BVProblem, grid: Grid) -> Trajectory:
    """Solution of ``L y = f`` with zero initial jet, extended to order ``n + r``."""
    d = problem.dims
    jet = [np.zeros((d.m, 1), dtype=complex)] * d.r
    y = integrate(problem.coefficients, problem.rhs, jet, grid)
    return extend_derivatives(y, problem.coefficients, problem.rhs, d.jet_count)


def _superpose(base: Trajectory, solutions, xi: np.ndarray, m: int) -> Trajectory:
    samples = base.samples.copy()
    for k, Y in enumerate(solutions):
        samples = samples + Y.samples @ xi[k * m : (k + 1) * m].reshape(m, -1)
    return Trajectory(base.grid, samples)


def solve(
    problem: BVProblem,
    grid: Grid,
    tol_solve: float = DEFAULT_TOL_SOLVE,
    rank_tolerance: float | None = None,
    p=None,
) -> SolveReport:
    """Solve ``L y = f``, ``B y = c`` on ``grid`` and classify solvability.

    ``status`` is ``no_solution`` when ``c - B y_part`` leaves the range of the
    characteristic matrix by more than ``1e-8 * (1 + |c|)`` in the least-squares
    sense. Otherwise the minimum-norm coefficient vector is used, and the
    status is ``unique`` exactly when the matrix has a trivial kernel.
    """
    report = validate(problem)
    if not report.ok:
        raise InvalidProblemError(report.violations)
    d = problem.dims
    Ys = fundamental_solutions(problem.coefficients, grid, d.n)
    M = characteristic_matrix(problem, grid, rank_tolerance, solutions=Ys)
    fred = fredholm_numbers(M, d)
    zero_traj = Trajectory(grid, np.zeros((d.jet_count + 1, grid.num_steps + 1, d.m, 1), dtype=complex))
    kernel = tuple(
        _superpose(zero_traj, Ys, M.nullspace[:, j], d.m) for j in range(M.nullspace.shape[1])
    )

    y_part = particular_solution(problem, grid)
    target = problem.c - apply_boundary_operator(problem.boundary, y_part)
    xi = M.pseudo_solve(target)
    consistency = float(np.linalg.norm(M.data @ xi - target))
    if consistency > CONSISTENCY_RTOL * (1.0 + np.linalg.norm(problem.c)):
        return SolveReport(NO_SOLUTION, None, kernel, None, None, fred, M, None, consistency, tol_solve)

    y = _superpose(y_part, Ys, xi, d.m)
    ode, bnd = residual_check(problem, y, p)
    status = UNIQUE if fred.dim_ker == 0 else NON_UNIQUE
    return SolveReport(status, y, kernel, ode, bnd, fred, M, xi, consistency, tol_solve)
