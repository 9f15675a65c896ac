"""Independent feasibility and objective verification of a solution."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..model import MilpInstance

DEFAULT_TOL = 1e-6
_OBJ_REL_TOL = 1e-9


@dataclass
class Violation:
    kind: str  # "row" | "bound" | "integrality" | "objective"
    name: str
    amount: float

    def __str__(self):
        return f"{self.kind} {self.name}: violation {self.amount:.3e}"


@dataclass
class CheckReport:
    violations: list = field(default_factory=list)
    recomputed_objective: float = 0.0
    reported_objective: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.violations


def check_solution(instance: MilpInstance, solution, tol: float = DEFAULT_TOL) -> CheckReport:
    """Verify every row, bound and binary against `tol` (absolute) and recompute
    the objective from the values; discrepancies are report entries."""
    report = CheckReport(reported_objective=solution.objective)
    x = [0.0] * instance.num_variables
    for key, val in solution.values.items():
        x[instance.column(key)] = val

    for j, var in enumerate(instance.variables):
        if x[j] < var.lb - tol or x[j] > var.ub + tol:
            amount = max(var.lb - x[j], x[j] - var.ub)
            report.violations.append(Violation("bound", str(var.key), amount))
        if var.integer and abs(x[j] - round(x[j])) > tol:
            report.violations.append(
                Violation("integrality", str(var.key), abs(x[j] - round(x[j])))
            )

    for row in instance.constraints:
        lhs = sum(coef * x[j] for j, coef in row.coeffs.items())
        if row.sense == "<=":
            amount = lhs - row.rhs
        elif row.sense == ">=":
            amount = row.rhs - lhs
        else:
            amount = abs(lhs - row.rhs)
        if amount > tol:
            report.violations.append(Violation("row", row.name, amount))

    recomputed = instance.objective_constant + sum(
        coef * x[j] for j, coef in instance.objective.items()
    )
    report.recomputed_objective = recomputed
    delta = abs(recomputed - solution.objective)
    if delta > _OBJ_REL_TOL * max(1.0, abs(recomputed)):
        report.violations.append(Violation("objective", "objective", delta))
    return report
