"""Continuity of the solution with respect to the data.

A family ``X(eps) = X(0) + eps * dX`` perturbs coefficients, the right-hand
side and the boundary vector. As ``eps`` shrinks, the distance between the
perturbed and base solutions should fall linearly, and its ratio to the data
discrepancy should stay between two positive constants.
"""

from pathlib import Path

from genbvp import run_family, two_sided_estimate_check
from genbvp.io import load_family

family = load_family(Path(__file__).parent / "data" / "family.json")
report = run_family(family, family.base.grid(2000))

print(f"base status {report.base_status}, index {report.index}")
print(f"{'eps':>8} {'status':>8} {'|M - M0|':>12} {'|y - y0|':>12} {'discrep.':>12} {'ratio':>10}")
for e in report.entries:
    print(f"{e.eps:8.0e} {e.status:>8} {e.matrix_distance:12.4e} {e.error:12.4e} {e.discrepancy:12.4e} {e.ratio:10.6f}")

print("conditions:", report.conditions)
g1, g2, ok = two_sided_estimate_check(report)
print(f"two-sided estimate: gamma1={g1:.4f} gamma2={g2:.4f} stable={ok}")
