"""Characteristic matrix of a first-order problem with a jet condition at one end.

The problem is ``y' + A y = 0`` on ``[0, 1]`` with
``B y = alpha_0 y(0) + alpha_1 y'(0) + alpha_2 y''(0)``. Every fundamental
solution satisfies ``Y^(k)(0) = (-A)^k``, so ``M = sum_k alpha_k (-A)^k``.
The demo computes ``M`` numerically and compares it with that sum.
"""

import numpy as np

from genbvp import characteristic_matrix, fredholm_numbers
from genbvp.oracles import one_point_closed_form, one_point_problem, random_disc

rng = np.random.default_rng(7)
A = random_disc(rng, (2, 2))
alphas = [random_disc(rng, (2, 2)) for _ in range(3)]

problem = one_point_problem(A, alphas)
M = characteristic_matrix(problem, problem.grid(2000))
closed = one_point_closed_form(A, alphas)

print("numerical M:\n", np.round(M.data, 6))
print("relative error:", np.linalg.norm(M.data - closed) / np.linalg.norm(closed))
print("singular values:", M.singular_values)
print("Fredholm numbers:", fredholm_numbers(M, problem.dims))

# Dropping a row makes the problem underdetermined: one kernel direction appears.
short = problem.replace(boundary=type(problem.boundary)(tuple(a[:1] for a in alphas)))
short = short.replace(dims=type(problem.dims)(m=2, r=1, n=2, l=1))
print("after dropping a row:", fredholm_numbers(characteristic_matrix(short, short.grid(2000)), short.dims))
