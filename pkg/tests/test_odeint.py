import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from genbvp import (
    Grid,
    InsufficientSmoothnessError,
    MatrixFunction,
    Trajectory,
    apply_differential_operator,
    extend_derivatives,
    fundamental_solutions,
    integrate,
    matrix_exponential,
)
from genbvp.oracles import random_disc

C = MatrixFunction.constant


def taylor_exp(A, terms=80):
    """Plain Taylor series; entries here are small enough for it to converge cleanly."""
    A = np.asarray(A, dtype=complex)
    out = np.eye(len(A), dtype=complex)
    term = np.eye(len(A), dtype=complex)
    for k in range(1, terms):
        term = term @ A / k
        out = out + term
    return out


# --------------------------------------------------------------- integrate
def test_zero_equation_keeps_constant():
    y = integrate([C(0.0)], None, [[[1.0]]], Grid.on(0, 1, 20))
    np.testing.assert_array_equal(y.samples[0, :, 0, 0], 1.0)
    np.testing.assert_array_equal(y.samples[1], 0.0)


def test_exponential_growth():
    y = integrate([C(-1.0)], None, [[[1.0]]], Grid.on(0, 1, 1000))
    assert abs(y.samples[0, -1, 0, 0] - math.e) < 1e-8
    np.testing.assert_allclose(y.samples[1], y.samples[0])  # y' = y from the equation


def test_double_integration_of_zero():
    y = integrate([C(0.0), C(0.0)], None, [[[0.0]], [[1.0]]], Grid.on(0, 1, 10))
    np.testing.assert_allclose(y.samples[0, :, 0, 0], np.linspace(0, 1, 11), atol=1e-15)
    assert y.samples[0, -1, 0, 0] == pytest.approx(1.0)


def test_forcing():
    # y' = 2t, y(0) = 0  ->  t^2 (RK4 exact for polynomial right-hand sides of degree <= 3)
    y = integrate([C(0.0)], MatrixFunction.polynomial([0.0, 2.0]), [[[0.0]]], Grid.on(0, 1, 10))
    np.testing.assert_allclose(y.samples[0, :, 0, 0], np.linspace(0, 1, 11) ** 2, atol=1e-14)


def test_rk4_convergence_order():
    errs = []
    for N in (20, 40, 80):
        y = integrate([C(-1.0)], None, [[[1.0]]], Grid.on(0, 1, N))
        errs.append(abs(y.samples[0, -1, 0, 0] - math.e))
    for e1, e2 in zip(errs, errs[1:]):
        assert 16 * 0.8 <= e1 / e2 <= 16 * 1.2


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**31))
def test_solution_map_linear(seed):
    rng = np.random.default_rng(seed)
    coeffs = [C(random_disc(rng, (2, 2))), MatrixFunction.polynomial([random_disc(rng, (2, 2)), random_disc(rng, (2, 2))])]
    grid = Grid.on(0, 1, 40)
    u = [random_disc(rng, (2, 1)) for _ in range(2)]
    v = [random_disc(rng, (2, 1)) for _ in range(2)]
    yu = integrate(coeffs, None, u, grid)
    yv = integrate(coeffs, None, v, grid)
    yuv = integrate(coeffs, None, [a + b for a, b in zip(u, v)], grid)
    np.testing.assert_allclose(yuv.samples, (yu + yv).samples, atol=1e-12)


def test_coefficient_failure_is_integration_error():
    from genbvp import IntegrationError

    bad = MatrixFunction.polynomial([[[1.0]]] * 2)
    object.__setattr__(bad, "data", (np.array([[[np.nan]]]), 0.0))
    with pytest.raises(IntegrationError):
        integrate([bad], None, [[[1.0]]], Grid.on(0, 1, 4))


# ------------------------------------------------------ fundamental solutions
def test_fundamental_identity_for_zero_coefficient():
    (Y0,) = fundamental_solutions([C(np.zeros((3, 3)))], Grid.on(0, 1, 20), n=1)
    np.testing.assert_array_equal(Y0.samples[0], np.broadcast_to(np.eye(3), Y0.samples[0].shape))
    np.testing.assert_array_equal(Y0.samples[1:], 0.0)


def test_fundamental_second_order():
    """y'' + A y' = 0: Y_0 = I and Y_1 = integral_0^t exp(-A s) ds."""
    rng = np.random.default_rng(4)
    A = random_disc(rng, (2, 2))
    grid = Grid.on(0, 1, 400)
    Y0, Y1 = fundamental_solutions([C(np.zeros((2, 2))), C(A)], grid)
    np.testing.assert_allclose(Y0.samples[0], np.broadcast_to(np.eye(2), Y0.samples[0].shape), atol=1e-14)
    for i in (0, 100, 400):
        t = grid.points[i]
        big = np.zeros((4, 4), dtype=complex)
        big[:2, :2], big[:2, 2:] = -A * t, np.eye(2) * t
        np.testing.assert_allclose(Y1.samples[0, i], taylor_exp(big)[:2, 2:], atol=1e-10)
        np.testing.assert_allclose(Y1.samples[1, i], taylor_exp(-A * t), atol=1e-10)


def test_fundamental_scalar_exponential():
    grid = Grid.on(0, 1, 1000)
    (Y0,) = fundamental_solutions([C(-1.0)], grid)
    np.testing.assert_allclose(Y0.samples[0, :, 0, 0], np.exp(grid.points), rtol=1e-10)


def test_fundamental_initial_conditions_exact():
    rng = np.random.default_rng(5)
    coeffs = [C(random_disc(rng, (2, 2))) for _ in range(3)]
    Ys = fundamental_solutions(coeffs, Grid.on(0, 1, 10), n=1)
    for k, Y in enumerate(Ys):
        for j in range(3):
            expected = np.eye(2) if j == k else np.zeros((2, 2))
            assert np.array_equal(Y.samples[j, 0], expected)
        assert Y.max_order == 4


# --------------------------------------------------------- extend_derivatives
def test_extend_noop_for_n_zero():
    y = integrate([C(-1.0)], None, [[[1.0]]], Grid.on(0, 1, 10))
    assert extend_derivatives(y, [C(-1.0)], None, 1) is y


def test_extend_constant_scalar():
    alpha = 0.7 - 0.2j
    y = integrate([C(alpha)], None, [[[1.0]]], Grid.on(0, 1, 50))
    ext = extend_derivatives(y, [C(alpha)], None, 3)
    np.testing.assert_allclose(ext.samples[2] / ext.samples[0], alpha**2)
    np.testing.assert_allclose(ext.samples[3] / ext.samples[0], -(alpha**3))


def test_extend_zero_equation():
    y = integrate([C(0.0), C(0.0)], None, [[[0.0]], [[1.0]]], Grid.on(0, 1, 10))
    ext = extend_derivatives(y, [C(0.0), C(0.0)], None, 5)
    np.testing.assert_array_equal(ext.samples[2:], 0.0)


def test_extend_matches_finite_difference():
    """Recurrence derivative r+1 vs centred difference of the order-r samples."""
    coeffs = [MatrixFunction.polynomial([[[1.0]], [[0.5]], [[-0.3]]]), MatrixFunction.polynomial([[[0.2]], [[1.0]]])]
    f = MatrixFunction.polynomial([[[1.0]], [[0.0]], [[2.0]]])
    errs = []
    for N in (50, 100):
        grid = Grid.on(0, 1, N)
        y = extend_derivatives(integrate(coeffs, f, [[[1.0]], [[0.0]]], grid), coeffs, f, 3)
        fd = (y.samples[2, 2:] - y.samples[2, :-2]) / (2 * grid.h)
        errs.append(np.abs(fd - y.samples[3, 1:-1]).max())
    assert errs[1] < 1e-3
    assert errs[0] / errs[1] > 3.0  # O(h^2)


def test_extend_needs_smooth_coefficients():
    t = np.linspace(0, 1, 11)
    A = MatrixFunction.sampled(t, [[[x]] for x in t])
    y = integrate([A], None, [[[1.0]]], Grid.on(0, 1, 10))
    with pytest.raises(InsufficientSmoothnessError, match="insufficient smoothness"):
        extend_derivatives(y, [A], None, 5)


def test_differential_operator_inverts_extension():
    coeffs = [MatrixFunction.polynomial([[[1.0]], [[0.5]]])]
    f = MatrixFunction.polynomial([[[1.0]], [[3.0]]])
    y = extend_derivatives(integrate(coeffs, f, [[[0.0]]], Grid.on(0, 1, 20)), coeffs, f, 3)
    Ly = apply_differential_operator(coeffs, y, 2)
    F = Trajectory.from_function(f, y.grid, 2)
    np.testing.assert_allclose(Ly.samples, F.samples, atol=1e-12)


# ---------------------------------------------------------- matrix exponential
def test_exp_zero():
    np.testing.assert_array_equal(matrix_exponential(np.zeros((3, 3))), np.eye(3))


def test_exp_scalar():
    assert abs(matrix_exponential([[1.0]])[0, 0] - taylor_exp([[1.0]])[0, 0]) < 1e-12
    assert abs(matrix_exponential([[1.0]])[0, 0] - 2.718281828459045) < 1e-12


def test_exp_nilpotent():
    np.testing.assert_allclose(matrix_exponential([[0, 1], [0, 0]]), [[1, 1], [0, 1]], atol=1e-15)


def test_exp_random_against_taylor():
    rng = np.random.default_rng(9)
    for m in (1, 2, 3):
        A = random_disc(rng, (m, m))
        np.testing.assert_allclose(matrix_exponential(A), taylor_exp(A), atol=1e-13)
