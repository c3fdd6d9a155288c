"""Boundary-value problem data model.

The problem is the order-``r`` system

    y^(r) + A_{r-1} y^(r-1) + ... + A_0 y = f   on (a, b),    B y = c,

where ``B`` maps the Sobolev space of order ``n + r`` into ``C^l`` through its
analytic representation

    B y = sum_{k < n+r} alpha_k y^(k)(a) + integral_a^b Phi(t) y^(n+r)(t) dt.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InsufficientJetError
from .functions import MatrixFunction, as_matrix
from .trajectory import Grid, Interval, Trajectory, integrate_nodes

__all__ = [
    "ProblemDims",
    "Interval",
    "BoundaryOperator",
    "BVProblem",
    "ValidationReport",
    "validate",
    "apply_boundary_operator",
    "sobolev_norm",
    "lp_norm",
    "parse_exponent",
]

EXPONENTS = (1, 2, math.inf)


def parse_exponent(p) -> float:
    """Normalise a Lebesgue exponent given as 1, 2, inf or the string ``"inf"``."""
    if isinstance(p, str):
        p = p.strip().lower()
        if p in ("inf", "infinity", "oo"):
            return math.inf
        p = float(p)
    if p in EXPONENTS:
        return math.inf if p == math.inf else int(p)
    raise ValueError(f"exponent p must be one of 1, 2, inf; got {p!r}")


@dataclass(frozen=True)
class ProblemDims:
    """System size ``m``, order ``r``, smoothness ``n``, condition count ``l``, exponent ``p``."""

    m: int
    r: int
    n: int
    l: int
    p: float = 2

    @property
    def jet_count(self) -> int:
        """Number of endpoint-jet matrices, ``n + r``."""
        return self.n + self.r

    @property
    def mr(self) -> int:
        return self.m * self.r

    @property
    def index(self) -> int:
        return self.m * self.r - self.l

    def problems(self) -> list[str]:
        out = []
        for name, lo in (("m", 1), ("r", 1), ("n", 0), ("l", 1)):
            v = getattr(self, name)
            if not isinstance(v, (int, np.integer)) or v < lo:
                out.append(f"dims: {name} must be an integer >= {lo}, got {v!r}")
        if self.p not in EXPONENTS:
            out.append(f"dims: p must be one of 1, 2, inf, got {self.p!r}")
        return out


@dataclass(frozen=True, eq=False)
class BoundaryOperator:
    """Endpoint jet matrices ``alphas[k]`` (each ``l x m``) plus integral kernel ``phi``.

    ``phi`` of None means the kernel vanishes identically.
    """

    alphas: tuple
    phi: MatrixFunction | None = None

    def __post_init__(self):
        object.__setattr__(self, "alphas", tuple(as_matrix(a) for a in self.alphas))

    @property
    def l(self) -> int:
        return self.alphas[0].shape[0]

    @property
    def m(self) -> int:
        return self.alphas[0].shape[1]

    @property
    def jet_count(self) -> int:
        return len(self.alphas)

    @classmethod
    def point_conditions(cls, interval: Interval, jet_count: int, conditions) -> BoundaryOperator:
        """Build ``B y = sum_i W_i y^(beta_i)(t_i)`` in analytic form.

        Each condition is ``(t_i, beta_i, W_i)`` with ``0 <= beta_i < jet_count``
        and ``W_i`` of shape ``l x m``. Values away from ``a`` are expanded by
        Taylor's formula with integral remainder, which moves the endpoint jet
        into ``alphas`` and the remainder into a piecewise polynomial ``phi``.
        """
        conditions = [(float(t), int(beta), as_matrix(w)) for t, beta, w in conditions]
        if not conditions:
            raise ValueError("at least one point condition is required")
        l, m = conditions[0][2].shape
        a, b = interval.a, interval.b
        alphas = [np.zeros((l, m), dtype=complex) for _ in range(jet_count)]
        kernels = []
        for t, beta, w in conditions:
            if w.shape != (l, m):
                raise ValueError("all condition matrices must share one shape")
            if not 0 <= beta < jet_count:
                raise ValueError(
                    f"derivative order {beta} is outside the continuous range 0..{jet_count - 1}"
                )
            if not a <= t <= b:
                raise ValueError(f"condition point {t} lies outside [{a}, {b}]")
            for j in range(beta, jet_count):
                alphas[j] += w * (t - a) ** (j - beta) / math.factorial(j - beta)
            if t == a:
                continue
            q = jet_count - 1 - beta
            coeffs = [np.zeros((l, m), dtype=complex) for _ in range(q + 1)]
            coeffs[q] = w * (-1.0) ** q / math.factorial(q)
            remainder = MatrixFunction.polynomial(coeffs, center=t)
            if t < b:
                remainder = MatrixFunction.piecewise(
                    [a, t, b], [remainder, MatrixFunction.zero(l, m)]
                )
            kernels.append((1.0, remainder))
        phi = MatrixFunction.linear_combination(kernels) if kernels else None
        return cls(tuple(alphas), phi)

    def __add__(self, other: BoundaryOperator) -> BoundaryOperator:
        if self.jet_count != other.jet_count:
            raise ValueError("boundary operators have different jet counts")
        alphas = tuple(x + y for x, y in zip(self.alphas, other.alphas))
        phis = [(1.0, f) for f in (self.phi, other.phi) if f is not None]
        phi = MatrixFunction.linear_combination(phis) if phis else None
        return BoundaryOperator(alphas, phi)

    def mixed(self, unitary) -> BoundaryOperator:
        """Left-multiply every row of the operator by ``unitary`` (``l' x l``)."""
        u = as_matrix(unitary)
        alphas = tuple(u @ x for x in self.alphas)
        phi = None
        if self.phi is not None:
            phi = _left_multiplied(self.phi, u)
        return BoundaryOperator(alphas, phi)


def _left_multiplied(fn: MatrixFunction, u: np.ndarray) -> MatrixFunction:
    if fn.kind == "constant":
        return MatrixFunction.constant(u @ fn.data)
    if fn.kind == "polynomial":
        coeffs, center = fn.data
        return MatrixFunction.polynomial(u @ coeffs, center)
    if fn.kind == "sampled":
        t, vals = fn.data
        return MatrixFunction.sampled(t, u @ vals)
    if fn.kind == "piecewise":
        bp, pieces = fn.data
        return MatrixFunction.piecewise(bp, [_left_multiplied(p, u) for p in pieces])
    return MatrixFunction.linear_combination([(w, _left_multiplied(f, u)) for w, f in fn.data])


@dataclass(frozen=True, eq=False)
class BVProblem:
    """``L y = f``, ``B y = c``; ``coefficients[j]`` multiplies ``y^(j)``."""

    dims: ProblemDims
    interval: Interval
    coefficients: tuple
    rhs: MatrixFunction
    boundary: BoundaryOperator
    c: np.ndarray = field(default=None)

    def __post_init__(self):
        object.__setattr__(self, "coefficients", tuple(self.coefficients))
        c = np.zeros(self.dims.l, dtype=complex) if self.c is None else self.c
        object.__setattr__(self, "c", np.asarray(c, dtype=complex).reshape(-1))

    def replace(self, **changes) -> BVProblem:
        kw = dict(
            dims=self.dims,
            interval=self.interval,
            coefficients=self.coefficients,
            rhs=self.rhs,
            boundary=self.boundary,
            c=self.c,
        )
        kw.update(changes)
        return BVProblem(**kw)

    def grid(self, num_steps: int) -> Grid:
        return Grid(self.interval, num_steps)


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok


def validate(problem: BVProblem) -> ValidationReport:
    """Collect every well-formedness violation of ``problem``; never raises."""
    v = list(problem.dims.problems()) + problem.interval.problems()
    d = problem.dims
    if len(problem.coefficients) != d.r:
        v.append(f"coefficient count: expected r={d.r}, got {len(problem.coefficients)}")
    for j, A in enumerate(problem.coefficients):
        if A.shape != (d.m, d.m):
            v.append(f"coefficient shape: A_{j} is {A.shape[0]}x{A.shape[1]}, expected {d.m}x{d.m}")
        if A.max_derivative_order < d.n:
            v.append(
                f"coefficient smoothness: A_{j} ({A.kind}) evaluates derivatives up to "
                f"{A.max_derivative_order}, n={d.n} required"
            )
    if problem.rhs.shape != (d.m, 1):
        v.append(f"rhs shape: expected {d.m}x1, got {problem.rhs.rows}x{problem.rhs.cols}")
    if problem.rhs.max_derivative_order < d.n:
        v.append(
            f"rhs smoothness: evaluates derivatives up to {problem.rhs.max_derivative_order}, "
            f"n={d.n} required"
        )
    B = problem.boundary
    if B.jet_count != d.jet_count:
        v.append(f"boundary operator jet count: expected n+r={d.jet_count}, got {B.jet_count}")
    for k, alpha in enumerate(B.alphas):
        if alpha.shape != (d.l, d.m):
            v.append(f"boundary alpha shape: alpha_{k} is {alpha.shape}, expected {(d.l, d.m)}")
    if B.phi is not None and B.phi.shape != (d.l, d.m):
        v.append(f"boundary phi shape: expected {(d.l, d.m)}, got {B.phi.shape}")
    if problem.c.shape != (d.l,):
        v.append(f"c length: expected l={d.l}, got {problem.c.size}")
    return ValidationReport(tuple(v))


def _segments(grid: Grid, breakpoints) -> list[tuple[int, int]]:
    cuts = [0]
    a, b = grid.interval.a, grid.interval.b
    for t in breakpoints:
        if not a < t < b:
            continue
        i = grid.node_index(t)
        if i is None:
            raise ValueError(
                f"kernel breakpoint t={t} is not a grid node; choose a step count that places it on the grid"
            )
        if i != cuts[-1]:
            cuts.append(i)
    if cuts[-1] != grid.num_steps:
        cuts.append(grid.num_steps)
    return list(zip(cuts[:-1], cuts[1:]))


def apply_boundary_operator(B: BoundaryOperator, y: Trajectory) -> np.ndarray:
    """Evaluate ``B y``.

    Returns an ``l``-vector for a single-column trajectory and an ``l x cols``
    matrix otherwise (column ``j`` is ``B`` applied to column ``j``).
    """
    top = B.jet_count
    if y.max_order < top:
        raise InsufficientJetError(
            f"insufficient jet: boundary operator needs derivatives up to {top}, "
            f"trajectory stores up to {y.max_order}"
        )
    out = sum(alpha @ y.samples[k, 0] for k, alpha in enumerate(B.alphas))
    if B.phi is not None and not B.phi.is_zero:
        grid = y.grid
        t = grid.points
        ytop = y.samples[top]
        for lo, hi in _segments(grid, B.phi.breakpoints):
            phi_vals = np.concatenate(
                [B.phi(t[lo:hi], side="right"), B.phi(t[hi : hi + 1], side="left")]
            )
            out = out + integrate_nodes(phi_vals @ ytop[lo : hi + 1], grid, 0, hi - lo)
    return out[:, 0] if y.cols == 1 else out


def lp_norm(values: np.ndarray, grid: Grid, p) -> float:
    """``L_p`` norm of node values (axis 0) with Euclidean pointwise magnitude."""
    p = parse_exponent(p)
    mag = np.sqrt(np.sum(np.abs(values.reshape(values.shape[0], -1)) ** 2, axis=1))
    if p == math.inf:
        return float(mag.max())
    if p == 1:
        return float(integrate_nodes(mag, grid).real)
    return float(math.sqrt(max(integrate_nodes(mag**2, grid).real, 0.0)))


def sobolev_norm(y: Trajectory, k: int, p) -> float:
    """``sum_{j<=k} ||y^(j)||_p`` by composite Simpson (``p`` in 1, 2) or grid max."""
    y.require(k)
    return sum(lp_norm(y.samples[j], y.grid, p) for j in range(k + 1))
