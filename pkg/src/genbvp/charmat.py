"""Characteristic matrix of a boundary-value problem and its Fredholm numbers."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import BVProblem, ProblemDims, apply_boundary_operator
from .odeint import fundamental_solutions
from .trajectory import Grid

__all__ = [
    "CharacteristicMatrix",
    "FredholmNumbers",
    "characteristic_matrix",
    "fredholm_numbers",
    "is_invertible",
    "default_rank_tolerance",
]


def default_rank_tolerance(singular_values, shape) -> float:
    """``max(shape) * sigma_max * 2**-52``."""
    smax = float(singular_values[0]) if len(singular_values) else 0.0
    return max(shape) * smax * np.finfo(float).eps


@dataclass(frozen=True, eq=False)
class CharacteristicMatrix:
    """The ``l x mr`` matrix ``([B Y_0], ..., [B Y_{r-1}])`` with its SVD.

    Block ``k`` sits in columns ``k*m .. (k+1)*m - 1``.
    """

    data: np.ndarray
    m: int
    singular_values: np.ndarray
    rank_tolerance: float
    rank: int
    left_vectors: np.ndarray
    right_vectors: np.ndarray

    @classmethod
    def from_array(cls, data, m: int, rank_tolerance: float | None = None) -> CharacteristicMatrix:
        data = np.asarray(data, dtype=complex)
        if data.ndim != 2 or data.shape[1] % m:
            raise ValueError(f"characteristic matrix shape {data.shape} is not l x (m*r) with m={m}")
        U, s, Vh = np.linalg.svd(data, full_matrices=True)
        tol = default_rank_tolerance(s, data.shape) if rank_tolerance is None else float(rank_tolerance)
        rank = int(np.sum(s > tol))
        return cls(data, m, s, tol, rank, U, Vh.conj().T)

    @property
    def l(self) -> int:
        return self.data.shape[0]

    @property
    def r(self) -> int:
        return self.data.shape[1] // self.m

    @property
    def blocks(self) -> tuple[np.ndarray, ...]:
        m = self.m
        return tuple(self.data[:, k * m : (k + 1) * m] for k in range(self.r))

    @property
    def nullspace(self) -> np.ndarray:
        """Orthonormal basis (columns) of the numerical kernel."""
        return self.right_vectors[:, self.rank :]

    @property
    def cokernel(self) -> np.ndarray:
        """Orthonormal basis (columns) of the orthogonal complement of the range."""
        return self.left_vectors[:, self.rank :]

    def pseudo_solve(self, rhs) -> np.ndarray:
        """Minimum-norm least-squares solution of ``M x = rhs`` at the numerical rank."""
        k = self.rank
        U = self.left_vectors[:, :k]
        V = self.right_vectors[:, :k]
        return V @ ((U.conj().T @ np.asarray(rhs, dtype=complex)) / self.singular_values[:k])


@dataclass(frozen=True)
class FredholmNumbers:
    dim_ker: int
    dim_coker: int
    index: int


def characteristic_matrix(
    problem: BVProblem, grid: Grid, rank_tolerance: float | None = None, solutions=None
) -> CharacteristicMatrix:
    """Assemble ``M(L, B)`` from the fundamental solutions on ``grid``.

    ``solutions`` may pass precomputed fundamental solutions (extended to
    order ``n + r``) to avoid integrating twice.
    """
    dims = problem.dims
    if solutions is None:
        solutions = fundamental_solutions(problem.coefficients, grid, dims.n)
    blocks = [np.atleast_2d(apply_boundary_operator(problem.boundary, Y)) for Y in solutions]
    blocks = [b.reshape(dims.l, dims.m) for b in blocks]
    return CharacteristicMatrix.from_array(np.hstack(blocks), dims.m, rank_tolerance)


def _check(M: CharacteristicMatrix, dims: ProblemDims) -> None:
    if M.data.shape != (dims.l, dims.mr):
        raise ValueError(f"matrix shape {M.data.shape} does not match l={dims.l}, mr={dims.mr}")


def fredholm_numbers(M: CharacteristicMatrix, dims: ProblemDims) -> FredholmNumbers:
    _check(M, dims)
    return FredholmNumbers(dims.mr - M.rank, dims.l - M.rank, dims.mr - dims.l)


def is_invertible(M: CharacteristicMatrix, dims: ProblemDims) -> bool:
    """True iff ``l == mr`` and ``M`` has full numerical rank."""
    _check(M, dims)
    return dims.l == dims.mr and M.rank == dims.mr
