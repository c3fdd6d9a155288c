"""Uniform grids, sampled derivative jets and grid quadrature."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.integrate import simpson

from .errors import InsufficientJetError


@dataclass(frozen=True)
class Interval:
    a: float
    b: float

    @property
    def length(self) -> float:
        return self.b - self.a

    def problems(self) -> list[str]:
        out = []
        if not (np.isfinite(self.a) and np.isfinite(self.b)):
            out.append("interval endpoints must be finite")
        elif not self.a < self.b:
            out.append(f"interval requires a < b, got [{self.a}, {self.b}]")
        return out


@dataclass(frozen=True)
class Grid:
    """``num_steps + 1`` equispaced nodes on ``interval``; ``num_steps`` is even."""

    interval: Interval
    num_steps: int

    def __post_init__(self):
        if self.interval.problems():
            raise ValueError("; ".join(self.interval.problems()))
        if self.num_steps < 2 or self.num_steps % 2:
            raise ValueError(f"num_steps must be a positive even integer, got {self.num_steps}")

    @classmethod
    def on(cls, a: float, b: float, num_steps: int) -> Grid:
        return cls(Interval(float(a), float(b)), int(num_steps))

    @property
    def h(self) -> float:
        return self.interval.length / self.num_steps

    @cached_property
    def points(self) -> np.ndarray:
        return np.linspace(self.interval.a, self.interval.b, self.num_steps + 1)

    def node_index(self, t: float, atol: float = 1e-9) -> int | None:
        """Index of the node at ``t``, or None if ``t`` is not a node."""
        pos = (t - self.interval.a) / self.h
        i = int(round(pos))
        if 0 <= i <= self.num_steps and abs(pos - i) <= atol * max(1.0, self.num_steps):
            return i
        return None


def integrate_nodes(values: np.ndarray, grid: Grid, lo: int = 0, hi: int | None = None):
    """Composite Simpson integral over nodes ``lo..hi`` along axis 0.

    Segments with an odd number of intervals close with Simpson's 3/8 rule on
    the last three, which keeps the rule exact for cubics.
    """
    hi = grid.num_steps if hi is None else hi
    n = hi - lo
    h = grid.h
    seg = values[lo : hi + 1]
    if n < 1:
        return np.zeros(values.shape[1:], dtype=values.dtype)
    if n == 1:
        return 0.5 * h * (seg[0] + seg[1])
    if n % 2 == 0:
        return simpson(seg, dx=h, axis=0)
    tail = 3.0 * h / 8.0 * (seg[-4] + 3.0 * seg[-3] + 3.0 * seg[-2] + seg[-1])
    if n == 3:
        return tail
    return simpson(seg[:-3], dx=h, axis=0) + tail


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Grid samples of a vector or matrix function and its derivatives.

    ``samples[k, i]`` is the ``k``-th derivative at node ``i``, an
    ``m x cols`` complex matrix.
    """

    grid: Grid
    samples: np.ndarray

    def __post_init__(self):
        s = self.samples
        if s.ndim != 4 or s.shape[1] != self.grid.num_steps + 1:
            raise ValueError(
                f"samples must have shape (orders, {self.grid.num_steps + 1}, m, cols), got {s.shape}"
            )

    @property
    def max_order(self) -> int:
        return self.samples.shape[0] - 1

    @property
    def m(self) -> int:
        return self.samples.shape[2]

    @property
    def cols(self) -> int:
        return self.samples.shape[3]

    def derivative(self, k: int) -> np.ndarray:
        """All node values of the ``k``-th derivative, shape ``(N+1, m, cols)``."""
        self.require(k)
        return self.samples[k]

    def require(self, order: int) -> None:
        if order > self.max_order:
            raise InsufficientJetError(
                f"insufficient jet: need derivative order {order}, trajectory stores up to {self.max_order}"
            )

    def truncated(self, order: int) -> Trajectory:
        self.require(order)
        return Trajectory(self.grid, self.samples[: order + 1])

    def column(self, j: int) -> Trajectory:
        return Trajectory(self.grid, self.samples[..., j : j + 1])

    def combine(self, weights) -> Trajectory:
        """Right-multiply every sample by the ``cols x q`` matrix ``weights``."""
        w = np.asarray(weights, dtype=complex)
        if w.ndim == 1:
            w = w[:, None]
        return Trajectory(self.grid, self.samples @ w)

    @classmethod
    def from_function(cls, fn, grid: Grid, max_order: int) -> Trajectory:
        """Sample a :class:`~genbvp.functions.MatrixFunction` and its derivatives."""
        t = grid.points
        return cls(grid, np.stack([fn(t, k) for k in range(max_order + 1)]))

    def _check_compatible(self, other: Trajectory) -> int:
        if self.grid != other.grid or self.samples.shape[2:] != other.samples.shape[2:]:
            raise ValueError("trajectories live on different grids or shapes")
        return min(self.max_order, other.max_order)

    def __add__(self, other: Trajectory) -> Trajectory:
        k = self._check_compatible(other)
        return Trajectory(self.grid, self.samples[: k + 1] + other.samples[: k + 1])

    def __sub__(self, other: Trajectory) -> Trajectory:
        k = self._check_compatible(other)
        return Trajectory(self.grid, self.samples[: k + 1] - other.samples[: k + 1])

    def __mul__(self, scalar) -> Trajectory:
        return Trajectory(self.grid, complex(scalar) * self.samples)

    __rmul__ = __mul__

    def __neg__(self) -> Trajectory:
        return Trajectory(self.grid, -self.samples)
