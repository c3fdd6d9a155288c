"""Matrix-valued function descriptors on an interval.

A :class:`MatrixFunction` describes a ``rows x cols`` complex matrix function of
``t`` together with as many derivatives as the representation can supply.
Constant and polynomial kinds differentiate exactly; the sampled kind goes
through a not-a-knot cubic spline and therefore stops at the second derivative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Any

import numpy as np
from numpy.polynomial import polynomial as P
from scipy.interpolate import CubicSpline

from .errors import InsufficientSmoothnessError

SPLINE_DERIVATIVE_CAP = 2

KINDS = ("constant", "polynomial", "sampled", "piecewise", "sum")


def as_matrix(value, rows=None, cols=None) -> np.ndarray:
    """Coerce ``value`` to a 2-D complex array, promoting scalars and vectors."""
    arr = np.asarray(value, dtype=complex)
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    elif arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2:
        raise ValueError(f"expected a matrix, got array of shape {arr.shape}")
    if rows is not None and cols is not None and arr.shape != (rows, cols):
        raise ValueError(f"expected shape {(rows, cols)}, got {arr.shape}")
    return arr


@dataclass(frozen=True, eq=False)
class MatrixFunction:
    """A complex ``rows x cols`` matrix function with derivative access.

    Use the classmethod constructors rather than building instances directly.
    Calling the object evaluates it::

        F(t)             # value at a scalar t, shape (rows, cols)
        F(ts, order=2)   # second derivative at an array of nodes, shape (len(ts), rows, cols)

    Parameters
    ----------
    kind : str
        One of ``constant``, ``polynomial``, ``sampled``, ``piecewise`` or ``sum``.
    rows, cols : int
        Matrix shape.
    data : Any
        Kind-specific payload.
    """

    kind: str
    rows: int
    cols: int
    data: Any

    # ------------------------------------------------------------------ builders
    @classmethod
    def constant(cls, value) -> MatrixFunction:
        mat = as_matrix(value)
        return cls("constant", mat.shape[0], mat.shape[1], mat)

    @classmethod
    def zero(cls, rows: int, cols: int) -> MatrixFunction:
        return cls.constant(np.zeros((rows, cols), dtype=complex))

    @classmethod
    def polynomial(cls, coefficients, center: float = 0.0) -> MatrixFunction:
        """Polynomial ``sum_i C_i (t - center)**i`` with matrix coefficients ``C_i``."""
        mats = [as_matrix(c) for c in coefficients]
        if not mats:
            raise ValueError("polynomial needs at least one coefficient")
        shape = mats[0].shape
        if any(m.shape != shape for m in mats):
            raise ValueError("polynomial coefficients must share one shape")
        return cls("polynomial", shape[0], shape[1], (np.stack(mats), float(center)))

    @classmethod
    def sampled(cls, t, values) -> MatrixFunction:
        """Not-a-knot cubic spline through ``values[i]`` at nodes ``t[i]``."""
        t = np.asarray(t, dtype=float)
        vals = np.stack([as_matrix(v) for v in values])
        if t.ndim != 1 or len(t) != len(vals):
            raise ValueError("sampled function needs one matrix per node")
        if len(t) < 4:
            raise ValueError("sampled function needs at least 4 nodes")
        if np.any(np.diff(t) <= 0):
            raise ValueError("sample nodes must be strictly increasing")
        return cls("sampled", vals.shape[1], vals.shape[2], (t, vals))

    @classmethod
    def piecewise(cls, breakpoints, pieces) -> MatrixFunction:
        """Function equal to ``pieces[i]`` on ``[breakpoints[i], breakpoints[i+1])``.

        The last piece also covers its right end. Outside the breakpoints the
        function is extended by the nearest piece.
        """
        bp = np.asarray(breakpoints, dtype=float)
        pieces = tuple(pieces)
        if len(bp) != len(pieces) + 1 or np.any(np.diff(bp) <= 0):
            raise ValueError("piecewise function needs increasing breakpoints, one more than pieces")
        shape = (pieces[0].rows, pieces[0].cols)
        if any((p.rows, p.cols) != shape for p in pieces):
            raise ValueError("pieces must share one shape")
        return cls("piecewise", shape[0], shape[1], (bp, pieces))

    @classmethod
    def linear_combination(cls, terms) -> MatrixFunction:
        """``sum_i w_i F_i`` for ``terms = [(w_1, F_1), ...]``.

        Constant and same-center polynomial terms are folded together so the
        common linear-family case stays a plain descriptor.
        """
        terms = [(complex(w), f) for w, f in terms]
        if not terms:
            raise ValueError("empty linear combination")
        shape = (terms[0][1].rows, terms[0][1].cols)
        if any((f.rows, f.cols) != shape for _, f in terms):
            raise ValueError("cannot combine functions of different shapes")
        if all(f.kind == "constant" for _, f in terms):
            return cls.constant(sum(w * f.data for w, f in terms))
        if all(f.kind in ("constant", "polynomial") for _, f in terms):
            centers = {f.data[1] for _, f in terms if f.kind == "polynomial"}
            if len(centers) == 1:
                center = centers.pop()
                deg = max(len(f.data[0]) if f.kind == "polynomial" else 1 for _, f in terms)
                acc = np.zeros((deg,) + shape, dtype=complex)
                for w, f in terms:
                    c = f.data[0] if f.kind == "polynomial" else f.data[None]
                    acc[: len(c)] += w * c
                return cls.polynomial(acc, center)
        return cls("sum", shape[0], shape[1], tuple(terms))

    def __add__(self, other: MatrixFunction) -> MatrixFunction:
        return MatrixFunction.linear_combination([(1.0, self), (1.0, other)])

    def __sub__(self, other: MatrixFunction) -> MatrixFunction:
        return MatrixFunction.linear_combination([(1.0, self), (-1.0, other)])

    def scaled(self, weight) -> MatrixFunction:
        return MatrixFunction.linear_combination([(weight, self)])

    # ---------------------------------------------------------------- properties
    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def max_derivative_order(self) -> float:
        """Highest derivative order this descriptor evaluates (``inf`` if unlimited)."""
        if self.kind in ("constant", "polynomial"):
            return math.inf
        if self.kind == "sampled":
            return SPLINE_DERIVATIVE_CAP
        if self.kind == "piecewise":
            return min(p.max_derivative_order for p in self.data[1])
        return min(f.max_derivative_order for _, f in self.data)

    @property
    def breakpoints(self) -> tuple[float, ...]:
        """Points where the function may be non-smooth (piecewise joins)."""
        if self.kind == "piecewise":
            bp, pieces = self.data
            inner = set(bp[1:-1].tolist())
            for p in pieces:
                inner.update(p.breakpoints)
            return tuple(sorted(inner))
        if self.kind == "sum":
            pts = set()
            for _, f in self.data:
                pts.update(f.breakpoints)
            return tuple(sorted(pts))
        return ()

    @property
    def is_zero(self) -> bool:
        return self.kind == "constant" and not np.any(self.data)

    @cached_property
    def _spline(self):
        t, vals = self.data
        return CubicSpline(t, vals, axis=0, bc_type="not-a-knot")

    # ---------------------------------------------------------------- evaluation
    def __call__(self, t, order: int = 0, side: str = "right") -> np.ndarray:
        """Evaluate the ``order``-th derivative.

        ``side`` selects the one-sided value at piecewise breakpoints.
        """
        scalar = np.ndim(t) == 0
        ts = np.atleast_1d(np.asarray(t, dtype=float))
        if order < 0:
            raise ValueError("derivative order must be nonnegative")
        if order > self.max_derivative_order:
            raise InsufficientSmoothnessError(
                f"{self.kind} function supports derivatives up to order "
                f"{self.max_derivative_order}, requested {order}"
            )
        out = self._evaluate(ts, order, side)
        return out[0] if scalar else out

    def _evaluate(self, ts: np.ndarray, order: int, side: str) -> np.ndarray:
        if self.kind == "constant":
            out = np.empty((len(ts), self.rows, self.cols), dtype=complex)
            out[...] = self.data if order == 0 else 0.0
            return out
        if self.kind == "polynomial":
            coeffs, center = self.data
            if order >= len(coeffs):
                return np.zeros((len(ts), self.rows, self.cols), dtype=complex)
            c = P.polyder(coeffs, order, axis=0) if order else coeffs
            vals = P.polyval(ts - center, c, tensor=True)
            return np.moveaxis(vals, -1, 0)
        if self.kind == "sampled":
            return np.asarray(self._spline(ts, order), dtype=complex)
        if self.kind == "piecewise":
            bp, pieces = self.data
            idx = np.searchsorted(bp, ts, side=side) - 1
            idx = np.clip(idx, 0, len(pieces) - 1)
            out = np.empty((len(ts), self.rows, self.cols), dtype=complex)
            for i, piece in enumerate(pieces):
                mask = idx == i
                if np.any(mask):
                    out[mask] = piece._evaluate(ts[mask], order, side)
            return out
        out = np.zeros((len(ts), self.rows, self.cols), dtype=complex)
        for w, f in self.data:
            out += w * f._evaluate(ts, order, side)
        return out

    def __repr__(self) -> str:
        return f"MatrixFunction(kind={self.kind!r}, shape={self.shape})"
