"""Solving problems and reading the solvability verdict.

Three JSON problems from ``data/`` are solved. The first has a unique
solution. The second is inconsistent, so no solution exists. The third is a
coupled second-order system with interior point conditions.
"""

from pathlib import Path

import numpy as np

from genbvp import solve
from genbvp.io import load_problem

DATA = Path(__file__).parent / "data"

for name in ("one_point.json", "inconsistent.json", "oscillator.json"):
    problem = load_problem(DATA / name)
    report = solve(problem, problem.grid(2000))
    print(f"{name}: status={report.status} fredholm={report.fredholm}")
    if report.solution is None:
        print(f"  consistency residual {report.consistency_residual:.3e}")
        continue
    y = report.solution
    print(f"  ode residual {report.ode_residual:.2e}, boundary residual {report.boundary_residual:.2e}")
    print(f"  y(a) = {np.round(y.samples[0, 0, :, 0], 6)}, y(b) = {np.round(y.samples[0, -1, :, 0], 6)}")
