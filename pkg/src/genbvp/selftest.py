"""Built-in oracle suite: numerical characteristic matrices against closed forms."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import oracles
from .charmat import characteristic_matrix, fredholm_numbers

GRID_STEPS = 2000


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _rel(a, b) -> float:
    return float(np.linalg.norm(a - b) / max(np.linalg.norm(b), 1e-300))


def check_one_point(cases: int = 20, seed: int = 1, tol: float = 1e-6) -> CheckResult:
    """First-order one-point problems, ``m`` in 1..3, ``n = 3``."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(cases):
        m = int(rng.integers(1, 4))
        A = oracles.random_disc(rng, (m, m))
        alphas = [oracles.random_disc(rng, (m, m)) for _ in range(4)]
        prob = oracles.one_point_problem(A, alphas)
        M = characteristic_matrix(prob, prob.grid(GRID_STEPS)).data
        worst = max(worst, _rel(M, oracles.one_point_closed_form(A, alphas)))
    return CheckResult("one-point first order", worst <= tol, f"max relative error {worst:.3e} (tol {tol:g})")


def check_two_point(seed: int = 2, tol: float = 1e-6) -> CheckResult:
    """Second-order two-point problems ``y'' + A y' = 0``, ``m`` in 1, 2, ``n = 1``."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for m in (1, 2):
        A = oracles.random_disc(rng, (m, m))
        alphas = [oracles.random_disc(rng, (2 * m, m)) for _ in range(3)]
        betas = [oracles.random_disc(rng, (2 * m, m)) for _ in range(3)]
        prob = oracles.two_point_problem(A, alphas, betas)
        M = characteristic_matrix(prob, prob.grid(GRID_STEPS)).data
        worst = max(worst, _rel(M, oracles.two_point_closed_form(A, alphas, betas)))
    return CheckResult("two-point second order", worst <= tol, f"max relative error {worst:.3e} (tol {tol:g})")


def check_multipoint(seed: int = 3, tol: float = 1e-10) -> CheckResult:
    """``A = 0`` with conditions at three points mixing derivative orders 0..2."""
    rng = np.random.default_rng(seed)
    worst, fred_ok = 0.0, True
    for m, l in ((1, 1), (2, 3), (3, 2), (2, 2)):
        conds = []
        for t in (0.0, 0.5, 1.0):
            for beta in (0, 1, 2):
                conds.append((t, beta, oracles.random_disc(rng, (l, m))))
        prob = oracles.multipoint_problem(m, conds, n=2)
        M = characteristic_matrix(prob, prob.grid(GRID_STEPS))
        closed = oracles.multipoint_closed_form(conds)
        worst = max(worst, float(np.abs(M.data - closed).max()))
        rank = np.linalg.matrix_rank(closed)
        fred = fredholm_numbers(M, prob.dims)
        fred_ok = fred_ok and fred.dim_ker == m - rank and fred.dim_coker == l - rank
    return CheckResult(
        "multipoint, zero coefficient",
        worst <= tol and fred_ok,
        f"max abs error {worst:.3e} (tol {tol:g}); Fredholm numbers {'match' if fred_ok else 'MISMATCH'}",
    )


def run_selftest() -> list[CheckResult]:
    return [check_one_point(), check_two_point(), check_multipoint()]
