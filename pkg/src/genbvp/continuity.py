"""Parameter-dependent problem families and continuity diagnostics.

A :class:`ProblemFamily` produces a problem for each ``eps`` of a decreasing
schedule. :func:`run_family` records, per ``eps``, how far the characteristic
matrix moved, the Fredholm numbers, the solution error against ``eps = 0`` and
the discrepancy of the unperturbed solution inside the perturbed problem.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .charmat import FredholmNumbers, characteristic_matrix, fredholm_numbers, is_invertible
from .errors import DegenerateFamilyError
from .functions import MatrixFunction
from .model import BoundaryOperator, BVProblem, apply_boundary_operator, sobolev_norm, validate
from .odeint import apply_differential_operator
from .solver import UNIQUE, solve
from .trajectory import Grid, Trajectory

__all__ = [
    "NOISE_FLOOR",
    "ProblemFamily",
    "ConditionVerdicts",
    "ContinuityEntry",
    "ContinuityReport",
    "geometric_schedule",
    "check_conditions",
    "run_family",
    "discrepancy",
    "two_sided_estimate_check",
    "semicontinuity_check",
]

NOISE_FLOOR = 1e-8


def geometric_schedule(start: float, factor: float, count: int) -> tuple[float, ...]:
    """``start, start*factor, ...`` (``count`` values); ``0 < factor < 1``."""
    if not (start > 0 and 0 < factor < 1 and count >= 1):
        raise ValueError("geometric schedule needs start > 0, 0 < factor < 1, count >= 1")
    return tuple(start * factor**i for i in range(count))


@dataclass(frozen=True, eq=False)
class ProblemFamily:
    """``X(eps) = X(0) + eps * dX`` for every problem ingredient, or a generator.

    Perturbation entries left as None are zero. ``coefficient_perturbations[j]``
    perturbs ``A_j``; ``alpha_perturbations[k]`` perturbs ``alpha_k``. Passing
    ``generator`` (a callable ``eps -> BVProblem``) replaces the linear law.
    """

    base: BVProblem
    schedule: tuple
    coefficient_perturbations: tuple | None = None
    alpha_perturbations: tuple | None = None
    phi_perturbation: MatrixFunction | None = None
    rhs_perturbation: MatrixFunction | None = None
    c_perturbation: np.ndarray | None = None
    generator: Callable[[float], BVProblem] | None = None
    epsilon0: float = math.inf

    def __post_init__(self):
        object.__setattr__(self, "schedule", tuple(float(e) for e in self.schedule))

    @property
    def mode(self) -> str:
        return "generator" if self.generator is not None else "linear"

    def problems(self) -> list[str]:
        out = []
        s = np.asarray(self.schedule)
        if len(s) == 0:
            out.append("schedule is empty")
        elif np.any(s <= 0) or np.any(s >= self.epsilon0):
            out.append(f"schedule entries must lie in (0, {self.epsilon0})")
        elif np.any(np.diff(s) >= 0):
            out.append("schedule must be strictly decreasing")
        d = self.base.dims
        if self.coefficient_perturbations is not None:
            if len(self.coefficient_perturbations) != d.r:
                out.append(f"coefficient perturbations: expected {d.r}, got {len(self.coefficient_perturbations)}")
            for j, dA in enumerate(self.coefficient_perturbations):
                if dA is not None and dA.shape != (d.m, d.m):
                    out.append(f"coefficient perturbation {j}: shape {dA.shape} != {(d.m, d.m)}")
        if self.alpha_perturbations is not None:
            if len(self.alpha_perturbations) != d.jet_count:
                out.append(f"alpha perturbations: expected {d.jet_count}, got {len(self.alpha_perturbations)}")
            for k, da in enumerate(self.alpha_perturbations):
                if da is not None and np.shape(da) != (d.l, d.m):
                    out.append(f"alpha perturbation {k}: shape {np.shape(da)} != {(d.l, d.m)}")
        if self.phi_perturbation is not None and self.phi_perturbation.shape != (d.l, d.m):
            out.append("phi perturbation shape mismatch")
        if self.rhs_perturbation is not None and self.rhs_perturbation.shape != (d.m, 1):
            out.append("rhs perturbation shape mismatch")
        if self.c_perturbation is not None and np.size(self.c_perturbation) != d.l:
            out.append("c perturbation length mismatch")
        return out

    def at(self, eps: float) -> BVProblem:
        """The problem at parameter ``eps``."""
        if self.generator is not None:
            return self.generator(eps)
        base = self.base
        if eps == 0:
            return base
        coeffs = list(base.coefficients)
        for j, dA in enumerate(self.coefficient_perturbations or ()):
            if dA is not None:
                coeffs[j] = MatrixFunction.linear_combination([(1.0, coeffs[j]), (eps, dA)])
        alphas = list(base.boundary.alphas)
        for k, da in enumerate(self.alpha_perturbations or ()):
            if da is not None:
                alphas[k] = alphas[k] + eps * np.asarray(da, dtype=complex)
        phi = base.boundary.phi
        if self.phi_perturbation is not None:
            terms = [(eps, self.phi_perturbation)] + ([(1.0, phi)] if phi is not None else [])
            phi = MatrixFunction.linear_combination(terms)
        rhs = base.rhs
        if self.rhs_perturbation is not None:
            rhs = MatrixFunction.linear_combination([(1.0, rhs), (eps, self.rhs_perturbation)])
        c = base.c
        if self.c_perturbation is not None:
            c = c + eps * np.asarray(self.c_perturbation, dtype=complex).reshape(-1)
        return base.replace(coefficients=coeffs, boundary=BoundaryOperator(alphas, phi), rhs=rhs, c=c)


@dataclass(frozen=True)
class ConditionVerdicts:
    """Verdicts for (0) trivial kernel, (I) coefficient and (II) boundary convergence."""

    trivial_kernel: bool
    coefficient_convergence: bool
    boundary_convergence: bool
    coefficient_distances: tuple
    boundary_distances: tuple

    @property
    def all_hold(self) -> bool:
        return self.trivial_kernel and self.coefficient_convergence and self.boundary_convergence


@dataclass(frozen=True)
class ContinuityEntry:
    eps: float
    matrix_distance: float
    fredholm: FredholmNumbers
    status: str
    error: float
    discrepancy: float
    ratio: float | None


@dataclass(frozen=True, eq=False)
class ContinuityReport:
    entries: tuple
    conditions: ConditionVerdicts
    base_fredholm: FredholmNumbers
    base_status: str
    index: int
    p: float
    num_steps: int
    gamma1: float | None = None
    gamma2: float | None = None
    notes: tuple = field(default=())

    @property
    def schedule(self) -> tuple:
        return tuple(e.eps for e in self.entries)

    @property
    def ratios(self) -> list[float]:
        return [e.ratio for e in self.entries if e.ratio is not None]

    def tail(self) -> tuple:
        """Entries in the last half of the schedule."""
        return self.entries[len(self.entries) // 2 :]


def _require_square(family: ProblemFamily) -> None:
    d = family.base.dims
    if d.l != d.mr:
        raise ValueError(f"continuity studies need l = mr; got l={d.l}, mr={d.mr}")
    issues = family.problems() + list(validate(family.base).violations)
    if issues:
        raise ValueError("invalid family: " + "; ".join(issues))


def _trends_to_zero(distances, schedule) -> bool:
    """Non-increasing up to the noise floor and decaying at least like ``sqrt(eps)``."""
    d = np.asarray(distances, dtype=float)
    if np.all(d <= NOISE_FLOOR):
        return True
    if np.any(np.diff(d) > NOISE_FLOOR + 1e-6 * d[:-1]):
        return False
    rate = math.sqrt(schedule[-1] / schedule[0]) if len(schedule) > 1 else 1.0
    return bool(d[-1] <= NOISE_FLOOR + d[0] * rate)


def _probe_trajectories(base: BVProblem, grid: Grid) -> list[Trajectory]:
    """Monomials ``(t - a)^q e_i`` for ``q = 0..n+r`` and each component ``i``."""
    d = base.dims
    a = base.interval.a
    probes = []
    for i in range(d.m):
        e = np.zeros((d.m, 1), dtype=complex)
        e[i, 0] = 1.0
        for q in range(d.jet_count + 1):
            coeffs = [np.zeros((d.m, 1))] * q + [e]
            fn = MatrixFunction.polynomial(coeffs, center=a)
            probes.append(Trajectory.from_function(fn, grid, d.jet_count))
    return probes


def check_conditions(family: ProblemFamily, grid: Grid) -> ConditionVerdicts:
    """Check conditions (0), (I) and (II) along the family's schedule.

    (0) is invertibility of the base characteristic matrix. (I) tracks
    ``sum_j ||A_j(eps) - A_j(0)||_{n,p}``; (II) tracks the largest
    ``|B(eps) y - B(0) y|`` over a monomial probe set. Both must trend to zero.
    """
    _require_square(family)
    base = family.base
    d = base.dims
    M0 = characteristic_matrix(base, grid)
    probes = _probe_trajectories(base, grid)
    base_images = [apply_boundary_operator(base.boundary, y) for y in probes]
    coef_dist, bnd_dist = [], []
    for eps in family.schedule:
        prob = family.at(eps)
        total = 0.0
        for A_eps, A0 in zip(prob.coefficients, base.coefficients):
            diff = Trajectory.from_function(A_eps - A0, grid, d.n)
            total += sobolev_norm(diff, d.n, d.p)
        coef_dist.append(total)
        bnd_dist.append(
            max(
                float(np.linalg.norm(apply_boundary_operator(prob.boundary, y) - by0))
                for y, by0 in zip(probes, base_images)
            )
        )
    return ConditionVerdicts(
        trivial_kernel=is_invertible(M0, d),
        coefficient_convergence=_trends_to_zero(coef_dist, family.schedule),
        boundary_convergence=_trends_to_zero(bnd_dist, family.schedule),
        coefficient_distances=tuple(coef_dist),
        boundary_distances=tuple(bnd_dist),
    )


def discrepancy(problem_eps: BVProblem, y0: Trajectory, p=None) -> float:
    """``||L(eps) y0 - f(eps)||_{n,p} + |B(eps) y0 - c(eps)|``."""
    d = problem_eps.dims
    p = d.p if p is None else p
    y0.require(d.jet_count)
    Ly = apply_differential_operator(problem_eps.coefficients, y0, d.n)
    f = Trajectory.from_function(problem_eps.rhs, y0.grid, d.n)
    ode = sobolev_norm(Ly - f, d.n, p)
    bnd = float(np.linalg.norm(apply_boundary_operator(problem_eps.boundary, y0) - problem_eps.c))
    return ode + bnd


def run_family(family: ProblemFamily, grid: Grid, tol_solve: float = 1e-6, rank_tolerance=None, p=None) -> ContinuityReport:
    """Evaluate every scheduled ``eps`` and attach the two-sided estimate constants."""
    _require_square(family)
    base = family.base
    d = base.dims
    p = d.p if p is None else p
    conditions = check_conditions(family, grid)
    base_report = solve(base, grid, tol_solve, rank_tolerance, p)
    M0 = base_report.matrix
    y0 = base_report.solution
    entries = []
    for eps in family.schedule:
        prob = family.at(eps)
        rep = solve(prob, grid, tol_solve, rank_tolerance, p)
        dist = float(np.linalg.norm(rep.matrix.data - M0.data))
        if y0 is not None and rep.solution is not None:
            err = sobolev_norm(y0 - rep.solution, d.jet_count, p)
        else:
            err = math.nan
        disc = discrepancy(prob, y0, p) if y0 is not None else math.nan
        ratio = err / disc if (err > NOISE_FLOOR and disc > NOISE_FLOOR) else None
        entries.append(ContinuityEntry(eps, dist, rep.fredholm, rep.status, err, disc, ratio))
    report = ContinuityReport(
        tuple(entries), conditions, base_report.fredholm, base_report.status, d.index, p, grid.num_steps
    )
    ratios = report.ratios
    if ratios:
        report = ContinuityReport(
            report.entries, conditions, report.base_fredholm, report.base_status,
            report.index, p, grid.num_steps, min(ratios), max(ratios),
        )
    return report


def two_sided_estimate_check(report: ContinuityReport, spread_bound: float = 0.1):
    """Empirical constants of the error/discrepancy estimate.

    Returns ``(gamma1, gamma2, passed)`` where ``gamma1``/``gamma2`` are the
    min/max ratio over the schedule and ``passed`` additionally requires the
    ratios in the last half of the schedule to agree within ``spread_bound``
    (relative spread ``max/min - 1``).
    """
    ratios = report.ratios
    if len(ratios) < 3:
        raise DegenerateFamilyError(
            f"degenerate family: {len(ratios)} entries with error and discrepancy above the "
            f"noise floor {NOISE_FLOOR}, need at least 3"
        )
    g1, g2 = min(ratios), max(ratios)
    tail = [e.ratio for e in report.tail() if e.ratio is not None]
    spread = (max(tail) / min(tail) - 1.0) if tail and min(tail) > 0 else math.inf
    passed = g1 > 0 and math.isfinite(g2) and spread <= spread_bound
    return g1, g2, passed


def semicontinuity_check(report: ContinuityReport, base_fredholm: FredholmNumbers) -> dict:
    """Per tail ``eps``: kernel and cokernel dimensions do not exceed the base values."""
    return {
        e.eps: (
            e.fredholm.dim_ker <= base_fredholm.dim_ker
            and e.fredholm.dim_coker <= base_fredholm.dim_coker
        )
        for e in report.tail()
    }
