import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from genbvp import (
    BoundaryOperator,
    BVProblem,
    CharacteristicMatrix,
    Grid,
    Interval,
    MatrixFunction,
    ProblemDims,
    characteristic_matrix,
    fredholm_numbers,
    fundamental_solutions,
    is_invertible,
    matrix_exponential,
)
from genbvp.oracles import multipoint_closed_form, multipoint_problem, random_disc

from conftest import scalar_problem

C = MatrixFunction.constant


def companion(coeff_mats):
    r = len(coeff_mats)
    m = coeff_mats[0].shape[0]
    K = np.zeros((m * r, m * r), dtype=complex)
    for j in range(r - 1):
        K[j * m : (j + 1) * m, (j + 1) * m : (j + 2) * m] = np.eye(m)
    for j, A in enumerate(coeff_mats):
        K[(r - 1) * m :, j * m : (j + 1) * m] = -A
    return K


def random_problem(rng, m, r, n, l, with_phi=True):
    coeffs = [MatrixFunction.polynomial([random_disc(rng, (m, m)), random_disc(rng, (m, m))]) for _ in range(r)]
    phi = MatrixFunction.polynomial([random_disc(rng, (l, m)), random_disc(rng, (l, m))]) if with_phi else None
    B = BoundaryOperator(tuple(random_disc(rng, (l, m)) for _ in range(n + r)), phi)
    return BVProblem(ProblemDims(m, r, n, l), Interval(0.0, 1.0), coeffs, MatrixFunction.zero(m, 1), B, np.zeros(l))


def test_one_point_scalar_example():
    prob = scalar_problem(a0=2.0, alphas=(1.0, 3.0, 0.0), c=(0.0,))
    M = characteristic_matrix(prob, prob.grid(100))
    np.testing.assert_allclose(M.data, [[-5.0]])
    f = fredholm_numbers(M, prob.dims)
    assert (f.dim_ker, f.dim_coker, f.index) == (0, 0, 0)
    assert is_invertible(M, prob.dims)


def test_identity_for_cauchy_condition():
    m = 3
    B = BoundaryOperator((np.eye(m),))
    prob = BVProblem(ProblemDims(m, 1, 0, m), Interval(0, 1), [C(np.zeros((m, m)))], MatrixFunction.zero(m, 1), B)
    np.testing.assert_array_equal(characteristic_matrix(prob, prob.grid(10)).data, np.eye(m))


def test_multipoint_sum_of_zero_order_weights():
    rng = np.random.default_rng(3)
    conds = [(t, beta, random_disc(rng, (2, 2))) for t in (0.0, 0.25, 1.0) for beta in (0, 1)]
    prob = multipoint_problem(2, conds, n=1)
    M = characteristic_matrix(prob, prob.grid(8))
    np.testing.assert_allclose(M.data, multipoint_closed_form(conds), atol=1e-14)


def test_blocks_layout():
    rng = np.random.default_rng(0)
    prob = random_problem(rng, 2, 3, 1, 4)
    M = characteristic_matrix(prob, prob.grid(20))
    assert M.data.shape == (4, 6)
    assert len(M.blocks) == 3
    np.testing.assert_array_equal(M.blocks[1], M.data[:, 2:4])
    assert np.all(np.diff(M.singular_values) <= 0)
    assert M.rank <= 4


# --------------------------------------------------------------- Fredholm
def test_zero_matrix_numbers():
    M = CharacteristicMatrix.from_array(np.zeros((2, 1)), m=1)
    f = fredholm_numbers(M, ProblemDims(1, 1, 0, 2))
    assert (f.dim_ker, f.dim_coker, f.index) == (1, 2, -1)


def test_full_rank_wide_matrix():
    rng = np.random.default_rng(1)
    M = CharacteristicMatrix.from_array(random_disc(rng, (5, 6)), m=2)
    f = fredholm_numbers(M, ProblemDims(2, 3, 0, 5))
    assert (f.dim_ker, f.dim_coker, f.index) == (1, 0, 1)


def test_is_invertible_cases():
    dims = ProblemDims(2, 1, 0, 2)
    assert is_invertible(CharacteristicMatrix.from_array(np.eye(2), 2), dims)
    assert not is_invertible(CharacteristicMatrix.from_array([[1, 0], [0, 0]], 2), dims)
    assert not is_invertible(CharacteristicMatrix.from_array(np.eye(3)[:, :2], 2), ProblemDims(2, 1, 0, 3))


def test_rank_tolerance_override():
    M = CharacteristicMatrix.from_array(np.diag([1.0, 1e-9]), m=2)
    assert M.rank == 2
    assert CharacteristicMatrix.from_array(np.diag([1.0, 1e-9]), m=2, rank_tolerance=1e-6).rank == 1


def test_dims_mismatch_rejected():
    with pytest.raises(ValueError):
        fredholm_numbers(CharacteristicMatrix.from_array(np.eye(2), 2), ProblemDims(1, 1, 0, 1))


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3), st.integers(0, 1), st.data())
def test_index_identity(m, r, n, data):
    l = data.draw(st.integers(1, m * r + 2))
    rng = np.random.default_rng(data.draw(st.integers(0, 2**31)))
    prob = random_problem(rng, m, r, n, l)
    f = fredholm_numbers(characteristic_matrix(prob, prob.grid(20)), prob.dims)
    assert f.index == m * r - l
    assert f.dim_ker - f.dim_coker == m * r - l


def test_unitary_row_mixing_preserves_singular_values():
    rng = np.random.default_rng(6)
    prob = random_problem(rng, 2, 2, 1, 3)
    U, _ = np.linalg.qr(random_disc(rng, (3, 3)))
    mixed = prob.replace(boundary=prob.boundary.mixed(U), c=U @ prob.c)
    grid = prob.grid(40)
    s0 = characteristic_matrix(prob, grid).singular_values
    s1 = characteristic_matrix(mixed, grid).singular_values
    np.testing.assert_allclose(s1, s0, rtol=1e-12, atol=1e-13)


def test_grid_refinement_rate():
    rng = np.random.default_rng(7)
    m, r, n = 2, 2, 1
    coeffs = [MatrixFunction.polynomial([random_disc(rng, (m, m)), random_disc(rng, (m, m))]) for _ in range(r)]
    conds = [(t, k, random_disc(rng, (4, m))) for t in (0.0, 1.0) for k in range(n + r)]
    B = BoundaryOperator.point_conditions(Interval(0, 1), n + r, conds)
    prob = BVProblem(ProblemDims(m, r, n, 4), Interval(0, 1), coeffs, MatrixFunction.zero(m, 1), B)
    Ms = [characteristic_matrix(prob, prob.grid(N)).data for N in (10, 20, 40)]
    ratio = np.linalg.norm(Ms[0] - Ms[1]) / np.linalg.norm(Ms[1] - Ms[2])
    assert 16 * 0.75 < ratio < 16 * 1.25


def test_constant_coefficients_match_exponential_closed_form():
    rng = np.random.default_rng(8)
    m, r, n, l = 2, 3, 2, 6
    mats = [random_disc(rng, (m, m)) for _ in range(r)]
    alphas = [random_disc(rng, (l, m)) for _ in range(n + r)]
    prob = BVProblem(ProblemDims(m, r, n, l), Interval(0, 1), [C(A) for A in mats], MatrixFunction.zero(m, 1), BoundaryOperator(tuple(alphas)))
    grid = prob.grid(2000)
    M = characteristic_matrix(prob, grid).data
    K = companion(mats)
    closed = sum(alpha @ np.linalg.matrix_power(K, j)[:m] for j, alpha in enumerate(alphas))
    assert np.linalg.norm(M - closed) / np.linalg.norm(closed) < 1e-6
    Z = matrix_exponential(K)
    for k, Y in enumerate(fundamental_solutions(prob.coefficients, grid)):
        np.testing.assert_allclose(Y.samples[0, -1], Z[:m, k * m : (k + 1) * m], rtol=1e-9, atol=1e-11)
