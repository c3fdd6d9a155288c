"""Fixed-step RK4 integration of order-``r`` linear systems and their jets.

The system ``y^(r) + sum_j A_j y^(j) = f`` is stepped as its companion
first-order system on the shared report grid. Derivatives above order ``r``
come from differentiating the equation (Leibniz rule), never from finite
differences of the computed solution.
"""

from __future__ import annotations

from math import comb

import numpy as np
import scipy.linalg

from .errors import InsufficientSmoothnessError, IntegrationError
from .functions import MatrixFunction
from .trajectory import Grid, Trajectory

__all__ = [
    "integrate",
    "fundamental_solutions",
    "extend_derivatives",
    "apply_differential_operator",
    "matrix_exponential",
]


def _sample(fn: MatrixFunction, t: np.ndarray, order: int = 0) -> np.ndarray:
    try:
        vals = fn(t, order)
    except InsufficientSmoothnessError:
        raise
    except Exception as exc:
        raise IntegrationError(f"coefficient evaluation failed: {exc}") from exc
    if not np.all(np.isfinite(vals)):
        raise IntegrationError("coefficient evaluation produced non-finite values")
    return vals


def integrate(coefficients, forcing, initial_jet, grid: Grid) -> Trajectory:
    """Integrate the order-``r`` system from the jet ``initial_jet`` at ``a``.

    Parameters
    ----------
    coefficients : sequence of MatrixFunction
        ``A_0 .. A_{r-1}``, each ``m x m``.
    forcing : MatrixFunction or None
        ``m x 1`` right-hand side, broadcast over every solution column, or
        None for the homogeneous equation.
    initial_jet : sequence of array_like
        ``r`` matrices ``y(a), y'(a), ..., y^(r-1)(a)``, each ``m x cols``.
    grid : Grid

    Returns
    -------
    Trajectory
        Derivatives ``0..r`` at every node; order ``r`` is read off the equation.
    """
    r = len(coefficients)
    jet = np.stack([np.asarray(u, dtype=complex) for u in initial_jet])
    if jet.ndim == 2:
        jet = jet[..., None]
    if len(jet) != r:
        raise ValueError(f"initial jet needs r={r} entries, got {len(jet)}")
    N, h = grid.num_steps, grid.h
    # nodes and midpoints interleaved: ts[2i] = t_i, ts[2i+1] = t_i + h/2
    ts = np.linspace(grid.interval.a, grid.interval.b, 2 * N + 1)
    A = np.stack([_sample(Aj, ts) for Aj in coefficients])  # (r, 2N+1, m, m)
    F = None if forcing is None or forcing.is_zero else _sample(forcing, ts)

    def rate(u, i):
        du = np.empty_like(u)
        du[:-1] = u[1:]
        acc = -np.einsum("jab,jbc->ac", A[:, i], u)
        if F is not None:
            acc = acc + F[i]
        du[-1] = acc
        return du

    states = np.empty((N + 1,) + jet.shape, dtype=complex)
    states[0] = jet
    u = jet.copy()
    with np.errstate(over="ignore", invalid="ignore"):
        for step in range(N):
            i = 2 * step
            k1 = rate(u, i)
            k2 = rate(u + 0.5 * h * k1, i + 1)
            k3 = rate(u + 0.5 * h * k2, i + 1)
            k4 = rate(u + h * k3, i + 2)
            u = u + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            states[step + 1] = u
    if not np.all(np.isfinite(states)):
        raise IntegrationError("integration overflowed")
    states[0] = jet  # keep the initial jet bitwise

    samples = np.empty((r + 1,) + states.shape[:1] + jet.shape[1:], dtype=complex)
    samples[:r] = np.moveaxis(states, 1, 0)
    top = -np.einsum("jnab,jnbc->nac", A[:, ::2], samples[:r])
    if F is not None:
        top = top + F[::2]
    samples[r] = top
    return Trajectory(grid, samples)


def _lower_terms(coeff_derivs, samples, r: int, i: int) -> np.ndarray:
    """``sum_j sum_nu C(i, nu) A_j^(nu) y^(j + i - nu)`` at every node."""
    acc = 0
    for j in range(r):
        for nu in range(i + 1):
            acc = acc + comb(i, nu) * (coeff_derivs[nu][j] @ samples[j + i - nu])
    return acc


def _coefficient_derivatives(coefficients, grid: Grid, upto: int):
    t = grid.points
    out = []
    for nu in range(upto + 1):
        for j, Aj in enumerate(coefficients):
            if Aj.max_derivative_order < nu:
                raise InsufficientSmoothnessError(
                    f"insufficient smoothness: A_{j} ({Aj.kind}) has no derivative of order {nu}"
                )
        out.append([_sample(Aj, t, nu) for Aj in coefficients])
    return out


def extend_derivatives(traj: Trajectory, coefficients, forcing, target_order: int) -> Trajectory:
    """Append derivatives ``r+1 .. target_order`` using the differentiated equation."""
    r = len(coefficients)
    n = target_order - r
    traj.require(r)
    if n <= 0:
        return traj
    if forcing is not None and forcing.max_derivative_order < n:
        raise InsufficientSmoothnessError(
            f"insufficient smoothness: forcing has no derivative of order {n}"
        )
    grid = traj.grid
    coeff_derivs = _coefficient_derivatives(coefficients, grid, n)
    samples = np.empty((target_order + 1,) + traj.samples.shape[1:], dtype=complex)
    samples[: r + 1] = traj.samples[: r + 1]
    for i in range(1, n + 1):
        top = -_lower_terms(coeff_derivs, samples, r, i)
        if forcing is not None and not forcing.is_zero:
            top = top + _sample(forcing, grid.points, i)
        samples[r + i] = top
    return Trajectory(grid, samples)


def apply_differential_operator(coefficients, y: Trajectory, order: int = 0) -> Trajectory:
    """``L y`` and its derivatives ``0..order`` sampled on ``y``'s grid."""
    r = len(coefficients)
    y.require(r + order)
    coeff_derivs = _coefficient_derivatives(coefficients, y.grid, order)
    out = np.stack(
        [y.samples[r + i] + _lower_terms(coeff_derivs, y.samples, r, i) for i in range(order + 1)]
    )
    return Trajectory(y.grid, out)


def fundamental_solutions(coefficients, grid: Grid, n: int = 0) -> list[Trajectory]:
    """Matrix solutions ``Y_0 .. Y_{r-1}`` with ``Y_k^(j)(a) = delta_kj I``.

    All ``r`` Cauchy problems are stepped together as one ``m x mr`` system;
    each returned trajectory carries derivatives up to ``n + r``.
    """
    r = len(coefficients)
    m = coefficients[0].rows
    eye = np.eye(m * r, dtype=complex)
    jet = [eye[j * m : (j + 1) * m] for j in range(r)]
    stacked = integrate(coefficients, None, jet, grid)
    stacked = extend_derivatives(stacked, coefficients, None, n + r)
    return [
        Trajectory(grid, stacked.samples[..., k * m : (k + 1) * m]) for k in range(r)
    ]


def matrix_exponential(A) -> np.ndarray:
    """``exp(A)`` by scaling and squaring with a degree-13 diagonal Pade approximant."""
    return scipy.linalg.expm(np.asarray(A, dtype=complex))
