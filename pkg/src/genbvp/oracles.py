"""Closed-form characteristic matrices for constant-coefficient test problems.

These formulas never touch the integrator; they are built from matrix powers
and :func:`~genbvp.odeint.matrix_exponential` only.

One-point first-order problem ``y' + A y = f``, ``B y = sum_k alpha_k y^(k)(a)``::

    M = sum_k alpha_k (-A)^k

Multipoint problem with ``A = 0`` and ``B y = sum_k sum_j alpha_kj y^(beta_kj)(t_k)``,
``beta_k0 = 0``::

    M = sum_k alpha_k0

Two-point second-order problem ``y'' + A y' = f``,
``B y = sum_k alpha_k y^(k)(a) + beta_k y^(k)(b)``, ``k = 0..n+1``. With
``E = exp(-A (b - a))`` and ``phi = integral_0^(b-a) exp(-A s) ds``::

    [B Y_0] = alpha_0 + beta_0
    [B Y_1] = beta_0 phi + sum_{k>=1} (alpha_k + beta_k E) (-A)^(k-1)

The often-quoted alternative ``sum_{k>=0} (alpha_k + beta_k E)(-A)^k`` for the
second block is ``[B Y_0] - [B Y_1] A``: the same matrix expressed in the
solution basis ``(Y_0, exp(-A (t - a)))``. See :func:`two_point_alternative_basis`.
"""

from __future__ import annotations

import numpy as np

from .functions import MatrixFunction
from .model import BoundaryOperator, BVProblem, Interval, ProblemDims
from .odeint import matrix_exponential

__all__ = [
    "random_disc",
    "one_point_problem",
    "one_point_closed_form",
    "multipoint_problem",
    "multipoint_closed_form",
    "two_point_problem",
    "two_point_closed_form",
    "two_point_alternative_basis",
]


def random_disc(rng: np.random.Generator, shape) -> np.ndarray:
    """Complex entries uniformly distributed in the closed unit disc."""
    rad = np.sqrt(rng.uniform(0.0, 1.0, shape))
    ang = rng.uniform(0.0, 2.0 * np.pi, shape)
    return rad * np.exp(1j * ang)


def one_point_problem(A, alphas, interval=(0.0, 1.0), c=None) -> BVProblem:
    """``y' + A y = 0`` with ``B y = sum_k alphas[k] y^(k)(a)``; ``n = len(alphas) - 1``."""
    A = np.atleast_2d(np.asarray(A, dtype=complex))
    m = A.shape[0]
    alphas = [np.atleast_2d(np.asarray(x, dtype=complex)) for x in alphas]
    l = alphas[0].shape[0]
    dims = ProblemDims(m=m, r=1, n=len(alphas) - 1, l=l)
    return BVProblem(
        dims, Interval(*map(float, interval)), [MatrixFunction.constant(A)],
        MatrixFunction.zero(m, 1), BoundaryOperator(tuple(alphas)), c,
    )


def one_point_closed_form(A, alphas) -> np.ndarray:
    A = np.atleast_2d(np.asarray(A, dtype=complex))
    out = 0
    power = np.eye(A.shape[0], dtype=complex)
    for alpha in alphas:
        out = out + np.atleast_2d(alpha) @ power
        power = power @ (-A)
    return out


def multipoint_problem(m, conditions, n, interval=(0.0, 1.0)) -> BVProblem:
    """``y' = 0`` with ``B y = sum W y^(beta)(t)`` over ``conditions = [(t, beta, W), ...]``."""
    iv = Interval(*map(float, interval))
    B = BoundaryOperator.point_conditions(iv, n + 1, conditions)
    dims = ProblemDims(m=m, r=1, n=n, l=B.l)
    return BVProblem(dims, iv, [MatrixFunction.zero(m, m)], MatrixFunction.zero(m, 1), B)


def multipoint_closed_form(conditions) -> np.ndarray:
    return sum(np.asarray(w, dtype=complex) for _, beta, w in conditions if beta == 0)


def two_point_problem(A, alphas, betas, interval=(0.0, 1.0)) -> BVProblem:
    """``y'' + A y' = 0`` with ``B y = sum_k alphas[k] y^(k)(a) + betas[k] y^(k)(b)``."""
    A = np.atleast_2d(np.asarray(A, dtype=complex))
    m = A.shape[0]
    iv = Interval(*map(float, interval))
    jet = len(alphas)  # n + r with r = 2
    conds = [(iv.a, k, a) for k, a in enumerate(alphas)] + [(iv.b, k, b) for k, b in enumerate(betas)]
    B = BoundaryOperator.point_conditions(iv, jet, conds)
    dims = ProblemDims(m=m, r=2, n=len(alphas) - 2, l=B.l)
    coeffs = [MatrixFunction.zero(m, m), MatrixFunction.constant(A)]
    return BVProblem(dims, iv, coeffs, MatrixFunction.zero(m, 1), B)


def _exp_and_phi(A, length):
    m = A.shape[0]
    big = np.zeros((2 * m, 2 * m), dtype=complex)
    big[:m, :m] = -A * length
    big[:m, m:] = np.eye(m) * length
    ex = matrix_exponential(big)
    return ex[:m, :m], ex[:m, m:]


def two_point_closed_form(A, alphas, betas, length: float = 1.0) -> np.ndarray:
    A = np.atleast_2d(np.asarray(A, dtype=complex))
    E, phi = _exp_and_phi(A, length)
    first = alphas[0] + betas[0]
    second = betas[0] @ phi
    power = np.eye(A.shape[0], dtype=complex)
    for k in range(1, len(alphas)):
        second = second + (alphas[k] + betas[k] @ E) @ power
        power = power @ (-A)
    return np.hstack([first, second])


def two_point_alternative_basis(A, alphas, betas, length: float = 1.0) -> np.ndarray:
    """``(alpha_0 + beta_0 ; sum_k (alpha_k + beta_k E)(-A)^k)``, basis ``(Y_0, exp(-A(t-a)))``."""
    A = np.atleast_2d(np.asarray(A, dtype=complex))
    E, _ = _exp_and_phi(A, length)
    second = 0
    power = np.eye(A.shape[0], dtype=complex)
    for alpha, beta in zip(alphas, betas):
        second = second + (alpha + beta @ E) @ power
        power = power @ (-A)
    return np.hstack([alphas[0] + betas[0], second])
