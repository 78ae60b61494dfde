"""Independent solution verification.

Re-evaluates every row and bound straight from the canonical model, on a
code path that shares nothing with the simplex (plain dict arithmetic, no
basis, no tableau), so it can serve as the oracle for solver output.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..build.compile import CanonicalModel
from .solution import evaluate_form


@dataclass
class CheckReport:
    max_violation_by_family: dict[str, float]
    violated_rows: list[tuple[str, float]]
    bound_violations: list[tuple[str, float]]
    integrality_violations: list[tuple[str, float]]
    objective: float
    tol: float

    @property
    def max_violation(self) -> float:
        worst = 0.0
        for value in self.max_violation_by_family.values():
            worst = max(worst, value)
        for _, value in self.bound_violations:
            worst = max(worst, value)
        for _, value in self.integrality_violations:
            worst = max(worst, value)
        return worst

    @property
    def ok(self) -> bool:
        return not (self.violated_rows or self.bound_violations
                    or self.integrality_violations)

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "max_violation": self.max_violation,
            "max_violation_by_family": dict(self.max_violation_by_family),
            "violated_rows": [list(v) for v in self.violated_rows],
            "bound_violations": [list(v) for v in self.bound_violations],
            "integrality_violations": [list(v) for v in
                                       self.integrality_violations],
            "objective": self.objective,
        }


def check_solution(cm: CanonicalModel, values: dict[int, float],
                   tol: float = 1e-6) -> CheckReport:
    """Report per-family maximum violations, individual violations beyond
    tol, and the recomputed objective for a complete value assignment."""
    if cm.rows_streamed:
        raise ValueError("rows were streamed at compile time; re-compile "
                         "without a row sink to check solutions")
    by_family: dict[str, float] = {name: 0.0 for name in cm.family_counts}
    violated: list[tuple[str, float]] = []
    for row in cm.rows:
        lhs = 0.0
        for var_id, coef in row.terms.items():
            lhs += coef * values[var_id]
        if row.sense == "<=":
            violation = lhs - row.rhs
        elif row.sense == ">=":
            violation = row.rhs - lhs
        else:
            violation = abs(lhs - row.rhs)
        if violation > by_family.get(row.family, 0.0):
            by_family[row.family] = violation
        if violation > tol:
            violated.append((row.name, violation))
    bounds: list[tuple[str, float]] = []
    integrality: list[tuple[str, float]] = []
    for v in cm.variables:
        x = values[v.id]
        violation = max(v.lb - x, x - v.ub)
        if violation > tol:
            bounds.append((f"{v.group}{tuple(v.key)}", violation))
        if v.type == "binary":
            drift = abs(x - round(x))
            if drift > tol:
                integrality.append((f"{v.group}{tuple(v.key)}", drift))
    objective = evaluate_form(cm.objective, values)
    return CheckReport(by_family, violated, bounds, integrality, objective, tol)
