import math

import numpy as np
import pytest

from genbvp import (
    BoundaryOperator,
    BVProblem,
    Grid,
    Interval,
    InvalidProblemError,
    MatrixFunction,
    ProblemDims,
    Trajectory,
    apply_boundary_operator,
    apply_differential_operator,
    residual_check,
    sobolev_norm,
    solve,
)
from genbvp.oracles import random_disc
from genbvp.solver import NO_SOLUTION, NON_UNIQUE, UNIQUE

from conftest import scalar_problem

C = MatrixFunction.constant


def test_constant_solution():
    prob = scalar_problem()
    rep = solve(prob, prob.grid(20))
    assert rep.status == UNIQUE
    np.testing.assert_allclose(rep.solution.samples[0, :, 0, 0], 1.0)


def test_exponential_solution():
    prob = scalar_problem(a0=-1.0)
    rep = solve(prob, prob.grid(1000))
    assert rep.status == UNIQUE
    assert abs(rep.solution.samples[0, -1, 0, 0] - math.e) < 1e-8


def test_constants_cannot_jump():
    B = BoundaryOperator.point_conditions(Interval(0, 1), 1, [(0.0, 0, [[1.0], [0.0]]), (1.0, 0, [[0.0], [1.0]])])
    prob = BVProblem(ProblemDims(1, 1, 0, 2), Interval(0, 1), [C(0.0)], C(0.0), B, [0.0, 1.0])
    rep = solve(prob, prob.grid(20))
    assert rep.status == NO_SOLUTION
    assert rep.solution is None
    assert rep.fredholm.dim_coker == 1


def test_invalid_problem_raises():
    with pytest.raises(InvalidProblemError):
        solve(scalar_problem(c=(1.0, 2.0)), Grid.on(0, 1, 10))


# ----------------------------------------------------------- residual_check
def test_residual_of_exact_constant():
    prob = scalar_problem()
    y = Trajectory.from_function(C(1.0), prob.grid(10), 1)
    assert residual_check(prob, y) == (0.0, 0.0)


def test_residual_of_shifted_constant():
    eps = 1e-3
    prob = scalar_problem()
    y = Trajectory.from_function(C(1.0 + eps), prob.grid(10), 1)
    ode, bnd = residual_check(prob, y)
    assert ode == 0.0
    assert bnd == pytest.approx(eps)


def test_residual_of_rk4_solution():
    prob = scalar_problem(a0=-1.0)
    rep = solve(prob, prob.grid(1000))
    ode, bnd = residual_check(prob, rep.solution)
    assert ode <= 1e-8 and bnd <= 1e-12


def test_residual_detects_wrong_candidate():
    # y = t does not solve y' = 0
    prob = scalar_problem(c=(0.0,))
    y = Trajectory.from_function(MatrixFunction.polynomial([0.0, 1.0]), prob.grid(10), 1)
    ode, bnd = residual_check(prob, y)
    assert ode == pytest.approx(1.0)
    assert bnd == 0.0


# ------------------------------------------------------------- non-unique
def test_kernel_basis_underdetermined():
    # y'' = 0 with y(0) = 1: solutions 1 + s t
    B = BoundaryOperator(([[1.0]], [[0.0]]))
    prob = BVProblem(ProblemDims(1, 2, 0, 1), Interval(0, 1), [C(0.0), C(0.0)], C(0.0), B, [1.0])
    grid = prob.grid(20)
    rep = solve(prob, grid)
    assert rep.status == NON_UNIQUE
    assert rep.fredholm.dim_ker == 1 and len(rep.kernel_basis) == 1
    (z,) = rep.kernel_basis
    z = z * (1 / z.samples[1, 0, 0, 0])
    np.testing.assert_allclose(z.samples[0, :, 0, 0], grid.points, atol=1e-14)
    # minimum-norm coefficients: no kernel component
    np.testing.assert_allclose(rep.solution.samples[0, :, 0, 0], 1.0, atol=1e-14)
    assert rep.within_tolerance


def test_kernel_vectors_solve_homogeneous_problem():
    rng = np.random.default_rng(2)
    m, r, n, l = 2, 2, 1, 2
    coeffs = [MatrixFunction.polynomial([random_disc(rng, (m, m)), random_disc(rng, (m, m))]) for _ in range(r)]
    B = BoundaryOperator(tuple(random_disc(rng, (l, m)) for _ in range(n + r)), MatrixFunction.constant(random_disc(rng, (l, m))))
    prob = BVProblem(ProblemDims(m, r, n, l), Interval(0, 1), coeffs, C(np.ones((m, 1))), B, random_disc(rng, l))
    rep = solve(prob, prob.grid(200))
    assert rep.fredholm.dim_ker == 2
    assert rep.status == NON_UNIQUE
    assert rep.within_tolerance
    for z in rep.kernel_basis:
        Lz = apply_differential_operator(coeffs, z, n)
        assert sobolev_norm(Lz, n, 2) <= rep.tol_solve
        assert np.linalg.norm(apply_boundary_operator(B, z)) <= rep.tol_solve * sobolev_norm(z, n + r, 2)


def test_overdetermined_consistent_is_unique():
    # y' = 0 with y(0) = 2 and y(1) = 2: consistent, solution unique, cokernel nontrivial
    B = BoundaryOperator.point_conditions(Interval(0, 1), 1, [(0.0, 0, [[1.0], [0.0]]), (1.0, 0, [[0.0], [1.0]])])
    prob = BVProblem(ProblemDims(1, 1, 0, 2), Interval(0, 1), [C(0.0)], C(0.0), B, [2.0, 2.0])
    rep = solve(prob, prob.grid(20))
    assert rep.status == UNIQUE
    assert (rep.fredholm.dim_ker, rep.fredholm.dim_coker) == (0, 1)


def test_square_status_matches_invertibility():
    rng = np.random.default_rng(11)
    for singular in (False, True):
        m, r = 2, 1
        alpha = random_disc(rng, (2, 2))
        if singular:
            alpha[1] = 2 * alpha[0]
        B = BoundaryOperator((alpha,))
        prob = BVProblem(ProblemDims(m, r, 0, 2), Interval(0, 1), [C(random_disc(rng, (2, 2)))], C(np.ones((2, 1))), B, random_disc(rng, 2))
        rep = solve(prob, prob.grid(50))
        f = rep.fredholm
        assert (rep.status == UNIQUE) == (f.dim_ker == 0 and f.dim_coker == 0)


def test_superposition():
    rng = np.random.default_rng(13)
    m, r, n = 2, 2, 1
    coeffs = [C(random_disc(rng, (m, m))) for _ in range(r)]
    B = BoundaryOperator(tuple(random_disc(rng, (4, m)) for _ in range(n + r)))
    f1 = MatrixFunction.polynomial([random_disc(rng, (m, 1)), random_disc(rng, (m, 1))])
    f2 = C(random_disc(rng, (m, 1)))
    c1, c2 = random_disc(rng, 4), random_disc(rng, 4)
    base = BVProblem(ProblemDims(m, r, n, 4), Interval(0, 1), coeffs, f1, B, c1)
    grid = base.grid(200)
    y1 = solve(base, grid).solution
    y2 = solve(base.replace(rhs=f2, c=c2), grid).solution
    y12 = solve(base.replace(rhs=f1 + f2, c=c1 + c2), grid).solution
    scale = np.abs(y12.samples[0]).max()
    np.testing.assert_allclose(y12.samples[0], (y1 + y2).samples[0], atol=1e-8 * scale)
