"""JSON problem/family descriptions and CSV report writers.

Complex entries are either bare numbers or ``[re, im]`` pairs. A function
descriptor is ``{"kind": "constant" | "polynomial" | "sampled", "data": ...}``:

* constant: a matrix (list of rows)
* polynomial: a list of coefficient matrices in ascending powers of
  ``t - center``; optional ``"center"`` (default 0)
* sampled: ``{"t": [...], "values": [matrix, ...]}``
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

from .continuity import ProblemFamily, geometric_schedule
from .errors import SchemaError
from .functions import MatrixFunction
from .model import BoundaryOperator, BVProblem, Interval, ProblemDims, parse_exponent

__all__ = [
    "parse_problem",
    "parse_family",
    "load_problem",
    "load_family",
    "problem_to_dict",
    "write_trajectory_csv",
    "write_matrix_csv",
    "write_continuity_csv",
    "format_number",
]


def _entry(value, key):
    if isinstance(value, bool):
        raise SchemaError(key, "booleans are not numbers")
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2 and all(
        isinstance(v, (int, float)) and not isinstance(v, bool) for v in value
    ):
        return complex(value[0], value[1])
    raise SchemaError(key, f"expected a number or [re, im] pair, got {value!r}")


def _vector(value, key) -> np.ndarray:
    if not isinstance(value, list) or not value:
        raise SchemaError(key, "expected a non-empty list")
    return np.array([_entry(v, f"{key}[{i}]") for i, v in enumerate(value)], dtype=complex)


def _matrix(value, key) -> np.ndarray:
    if not isinstance(value, list) or not value or not all(isinstance(row, list) for row in value):
        raise SchemaError(key, "expected a matrix given as a list of rows")
    rows = [[_entry(v, f"{key}[{i}][{j}]") for j, v in enumerate(row)] for i, row in enumerate(value)]
    if len({len(r) for r in rows}) != 1:
        raise SchemaError(key, "matrix rows have different lengths")
    return np.array(rows, dtype=complex)


def _require(obj, name, key):
    if not isinstance(obj, dict) or name not in obj:
        raise SchemaError(f"{key}.{name}" if key else name, "missing required key")
    return obj[name]


def parse_function(desc, key) -> MatrixFunction:
    if not isinstance(desc, dict):
        raise SchemaError(key, "expected a function descriptor object")
    kind = _require(desc, "kind", key)
    data = _require(desc, "data", key)
    try:
        if kind == "constant":
            return MatrixFunction.constant(_matrix(data, f"{key}.data"))
        if kind == "polynomial":
            if not isinstance(data, list) or not data:
                raise SchemaError(f"{key}.data", "expected a list of coefficient matrices")
            coeffs = [_matrix(c, f"{key}.data[{i}]") for i, c in enumerate(data)]
            return MatrixFunction.polynomial(coeffs, float(desc.get("center", 0.0)))
        if kind == "sampled":
            t = _require(data, "t", f"{key}.data")
            values = _require(data, "values", f"{key}.data")
            mats = [_matrix(v, f"{key}.data.values[{i}]") for i, v in enumerate(values)]
            return MatrixFunction.sampled(t, mats)
    except SchemaError:
        raise
    except (ValueError, TypeError) as exc:
        raise SchemaError(key, str(exc)) from exc
    raise SchemaError(f"{key}.kind", f"unknown kind {kind!r}")


def _dims(obj) -> ProblemDims:
    d = _require(obj, "dims", "")
    vals = {}
    for name in ("m", "r", "n", "l"):
        v = _require(d, name, "dims")
        if not isinstance(v, int) or isinstance(v, bool):
            raise SchemaError(f"dims.{name}", f"expected an integer, got {v!r}")
        vals[name] = v
    try:
        p = parse_exponent(d.get("p", 2))
    except ValueError as exc:
        raise SchemaError("dims.p", str(exc)) from exc
    return ProblemDims(p=p, **vals)


def _boundary(obj, interval, dims) -> BoundaryOperator:
    b = _require(obj, "boundary", "")
    alphas_raw = _require(b, "alphas", "boundary")
    if not isinstance(alphas_raw, list):
        raise SchemaError("boundary.alphas", "expected a list of matrices")
    alphas = [_matrix(a, f"boundary.alphas[{k}]") for k, a in enumerate(alphas_raw)]
    phi = b.get("phi")
    phi = None if phi is None else parse_function(phi, "boundary.phi")
    if not alphas:
        alphas = [np.zeros((dims.l, dims.m), dtype=complex) for _ in range(dims.jet_count)]
    op = BoundaryOperator(tuple(alphas), phi)
    points = b.get("points")
    if points:
        conds = []
        for i, pt in enumerate(points):
            key = f"boundary.points[{i}]"
            t = _require(pt, "t", key)
            order = _require(pt, "order", key)
            conds.append((t, order, _matrix(_require(pt, "matrix", key), f"{key}.matrix")))
        try:
            op = op + BoundaryOperator.point_conditions(interval, len(alphas), conds)
        except ValueError as exc:
            raise SchemaError("boundary.points", str(exc)) from exc
    return op


def _coefficients(raw, dims, key) -> list:
    if not isinstance(raw, list):
        raise SchemaError(key, "expected a list of coefficient descriptors")
    slots = [None] * dims.r
    for i, desc in enumerate(raw):
        order = _require(desc, "order", f"{key}[{i}]")
        if not isinstance(order, int) or not 0 <= order < dims.r:
            raise SchemaError(f"{key}[{i}].order", f"expected an integer in 0..{dims.r - 1}")
        if slots[order] is not None:
            raise SchemaError(f"{key}[{i}].order", f"duplicate order {order}")
        slots[order] = parse_function(desc, f"{key}[{i}]")
    return slots


def parse_problem(obj: dict) -> BVProblem:
    """Build a :class:`BVProblem` from a decoded JSON object."""
    if not isinstance(obj, dict):
        raise SchemaError("<root>", "expected a JSON object")
    iv = _require(obj, "interval", "")
    if not (isinstance(iv, list) and len(iv) == 2):
        raise SchemaError("interval", "expected [a, b]")
    interval = Interval(float(iv[0]), float(iv[1]))
    dims = _dims(obj)
    slots = _coefficients(_require(obj, "coefficients", ""), dims, "coefficients")
    missing = [j for j, s in enumerate(slots) if s is None]
    if missing:
        raise SchemaError("coefficients", f"missing orders {missing}")
    rhs = obj.get("rhs")
    rhs = MatrixFunction.zero(dims.m, 1) if rhs is None else parse_function(rhs, "rhs")
    boundary = _boundary(obj, interval, dims)
    c = _vector(_require(obj, "c", ""), "c")
    return BVProblem(dims, interval, slots, rhs, boundary, c)


def parse_family(obj: dict) -> ProblemFamily:
    base = parse_problem(_require(obj, "base", ""))
    dims = base.dims
    pert = obj.get("perturbations") or {}
    kw = {}
    if "coefficients" in pert:
        kw["coefficient_perturbations"] = tuple(
            _coefficients(pert["coefficients"], dims, "perturbations.coefficients")
        )
    if "alphas" in pert:
        kw["alpha_perturbations"] = tuple(
            None if a is None else _matrix(a, f"perturbations.alphas[{k}]")
            for k, a in enumerate(pert["alphas"])
        )
    if pert.get("phi") is not None:
        kw["phi_perturbation"] = parse_function(pert["phi"], "perturbations.phi")
    if pert.get("rhs") is not None:
        kw["rhs_perturbation"] = parse_function(pert["rhs"], "perturbations.rhs")
    if pert.get("c") is not None:
        kw["c_perturbation"] = _vector(pert["c"], "perturbations.c")
    sched = _require(obj, "schedule", "")
    if isinstance(sched, dict):
        try:
            schedule = geometric_schedule(
                float(_require(sched, "start", "schedule")),
                float(_require(sched, "factor", "schedule")),
                int(_require(sched, "count", "schedule")),
            )
        except ValueError as exc:
            raise SchemaError("schedule", str(exc)) from exc
    elif isinstance(sched, list) and sched:
        schedule = tuple(float(e) for e in sched)
    else:
        raise SchemaError("schedule", "expected a list of eps values or {start, factor, count}")
    family = ProblemFamily(base, schedule, **kw)
    issues = family.problems()
    if issues:
        raise SchemaError("perturbations", "; ".join(issues))
    return family


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise SchemaError(str(path), f"invalid JSON: {exc}") from exc


def load_problem(path) -> BVProblem:
    return parse_problem(_load_json(path))


def load_family(path) -> ProblemFamily:
    return parse_family(_load_json(path))


# ---------------------------------------------------------------- serialisation
def _enc(z: complex):
    z = complex(z)
    return z.real if z.imag == 0 else [z.real, z.imag]


def _enc_matrix(mat) -> list:
    return [[_enc(v) for v in row] for row in np.asarray(mat)]


def _enc_function(fn: MatrixFunction) -> dict:
    if fn.kind == "constant":
        return {"kind": "constant", "data": _enc_matrix(fn.data)}
    if fn.kind == "polynomial":
        coeffs, center = fn.data
        return {"kind": "polynomial", "center": center, "data": [_enc_matrix(c) for c in coeffs]}
    if fn.kind == "sampled":
        t, vals = fn.data
        return {"kind": "sampled", "data": {"t": list(map(float, t)), "values": [_enc_matrix(v) for v in vals]}}
    raise ValueError(f"{fn.kind} functions have no JSON form; describe them through boundary points")


def problem_to_dict(problem: BVProblem) -> dict:
    """Inverse of :func:`parse_problem` for constant/polynomial/sampled descriptors."""
    d = problem.dims
    B = problem.boundary
    return {
        "interval": [problem.interval.a, problem.interval.b],
        "dims": {"m": d.m, "r": d.r, "n": d.n, "l": d.l, "p": "inf" if d.p == math.inf else d.p},
        "coefficients": [dict(order=j, **_enc_function(A)) for j, A in enumerate(problem.coefficients)],
        "rhs": _enc_function(problem.rhs),
        "boundary": {
            "alphas": [_enc_matrix(a) for a in B.alphas],
            "phi": None if B.phi is None else _enc_function(B.phi),
        },
        "c": [_enc(v) for v in problem.c],
    }


def format_number(x) -> str:
    """17 significant digits in scientific notation."""
    return f"{float(x):.16e}"


def _complex_cells(values) -> list[str]:
    out = []
    for v in np.ravel(values):
        out += [format_number(v.real), format_number(v.imag)]
    return out


def write_matrix_csv(fh, matrix) -> None:
    matrix = np.asarray(matrix)
    w = csv.writer(fh, lineterminator="\n")
    w.writerow([f"col{j}_{part}" for j in range(matrix.shape[1]) for part in ("re", "im")])
    for row in matrix:
        w.writerow(_complex_cells(row))


def write_trajectory_csv(fh, traj) -> None:
    """One row per node: ``t`` then re/im of every component of every stored derivative."""
    w = csv.writer(fh, lineterminator="\n")
    header = ["t"]
    for k in range(traj.max_order + 1):
        for i in range(traj.m):
            for j in range(traj.cols):
                name = f"d{k}_y{i}" if traj.cols == 1 else f"d{k}_y{i}_{j}"
                header += [f"{name}_re", f"{name}_im"]
    w.writerow(header)
    for node, t in enumerate(traj.grid.points):
        w.writerow([format_number(t)] + _complex_cells(traj.samples[:, node]))


def write_continuity_csv(fh, report) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["eps", "matrix_distance", "dim_ker", "dim_coker", "index", "status", "error", "discrepancy", "ratio"])
    for e in report.entries:
        w.writerow([
            format_number(e.eps),
            format_number(e.matrix_distance),
            e.fredholm.dim_ker,
            e.fredholm.dim_coker,
            e.fredholm.index,
            e.status,
            format_number(e.error),
            format_number(e.discrepancy),
            "" if e.ratio is None else format_number(e.ratio),
        ])


def open_output(path: str | Path | None, name: str):
    if path is None:
        return None
    out = Path(path)
    out.mkdir(parents=True, exist_ok=True)
    return open(out / name, "w", newline="")
