import numpy as np
import pytest

from genbvp import BoundaryOperator, BVProblem, Grid, Interval, MatrixFunction, ProblemDims


def scalar_problem(a0=0.0, alphas=(1.0,), c=(1.0,), rhs=0.0, n=None, interval=(0.0, 1.0), phi=None, p=2):
    """First-order scalar problem ``y' + a0 y = rhs`` with one-point conditions."""
    alphas = [np.atleast_2d(np.asarray(a, dtype=complex)).reshape(-1, 1) for a in alphas]
    n = len(alphas) - 1 if n is None else n
    l = alphas[0].shape[0]
    rhs_fn = rhs if isinstance(rhs, MatrixFunction) else MatrixFunction.constant(rhs)
    a0_fn = a0 if isinstance(a0, MatrixFunction) else MatrixFunction.constant(a0)
    return BVProblem(
        ProblemDims(1, 1, n, l, p), Interval(*interval), [a0_fn], rhs_fn,
        BoundaryOperator(tuple(alphas), phi), np.asarray(c, dtype=complex),
    )


@pytest.fixture
def unit_grid():
    return Grid.on(0.0, 1.0, 200)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES = []


@pytest.fixture
def criterion():
    """Record one acceptance verdict line; printed in the terminal summary."""

    def record(number, passed, detail):
        ACCEPTANCE_LINES.append(f"criterion {number:>2}: {'PASS' if passed else 'FAIL'}  {detail}")
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split(":")[0].split()[1])):
            terminalreporter.write_line(line)
