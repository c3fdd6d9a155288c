"""Linear ODE systems with generic boundary conditions: characteristic matrices,
Fredholm numbers, shooting solutions and parameter-continuity diagnostics."""

from .charmat import (
    CharacteristicMatrix,
    FredholmNumbers,
    characteristic_matrix,
    fredholm_numbers,
    is_invertible,
)
from .continuity import (
    ContinuityReport,
    ProblemFamily,
    check_conditions,
    discrepancy,
    geometric_schedule,
    run_family,
    semicontinuity_check,
    two_sided_estimate_check,
)
from .errors import (
    BVPError,
    DegenerateFamilyError,
    InsufficientJetError,
    InsufficientSmoothnessError,
    IntegrationError,
    InvalidProblemError,
    SchemaError,
)
from .functions import MatrixFunction
from .model import (
    BoundaryOperator,
    BVProblem,
    Interval,
    ProblemDims,
    apply_boundary_operator,
    sobolev_norm,
    validate,
)
from .odeint import (
    apply_differential_operator,
    extend_derivatives,
    fundamental_solutions,
    integrate,
    matrix_exponential,
)
from .solver import SolveReport, residual_check, solve
from .trajectory import Grid, Trajectory

__version__ = "0.1.0"
