"""Two closed forms for a second-order problem with conditions at both ends.

For ``y'' + A y' = 0`` the fundamental solutions are ``Y_0 = I`` and
``Y_1 = integral_0^(t-a) exp(-A s) ds``. The printed block formula
``sum_k (alpha_k + beta_k E)(-A)^k`` instead uses ``exp(-A(t-a))`` as the
second basis element. Both describe the same operator, and the demo checks
that they differ exactly by the change of basis ``T = [[I, I], [0, -A]]``.
"""

import numpy as np

from genbvp import characteristic_matrix
from genbvp.oracles import (
    random_disc,
    two_point_alternative_basis,
    two_point_closed_form,
    two_point_problem,
)

rng = np.random.default_rng(3)
m = 2
A = random_disc(rng, (m, m))
alphas = [random_disc(rng, (2 * m, m)) for _ in range(3)]
betas = [random_disc(rng, (2 * m, m)) for _ in range(3)]

problem = two_point_problem(A, alphas, betas)
M = characteristic_matrix(problem, problem.grid(2000)).data
direct = two_point_closed_form(A, alphas, betas)
other = two_point_alternative_basis(A, alphas, betas)
T = np.block([[np.eye(m), np.eye(m)], [np.zeros((m, m)), -A]])

rel = lambda x, y: np.linalg.norm(x - y) / np.linalg.norm(y)
print(f"M vs fundamental-solution form: {rel(M, direct):.2e}")
print(f"M vs exponential-basis form:    {rel(M, other):.2e}")
print(f"M T vs exponential-basis form:  {rel(M @ T, other):.2e}")
for N in (250, 500, 1000):
    err = rel(characteristic_matrix(problem, problem.grid(N)).data, direct)
    print(f"N={N:5d} error {err:.3e}")
