"""Solver-facing result types shared by every backend."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Optional


@dataclass(frozen=True)
class SolveStatus:
    kind: str  # "Optimal" | "Infeasible" | "Unbounded" | "Limit"
    reason: Optional[str] = None

    @property
    def is_optimal(self) -> bool:
        return self.kind == "Optimal"

    def __str__(self):
        return f"{self.kind}({self.reason})" if self.reason else self.kind


OPTIMAL = SolveStatus("Optimal")
INFEASIBLE = SolveStatus("Infeasible")
UNBOUNDED = SolveStatus("Unbounded")


def limit(reason: str) -> SolveStatus:
    return SolveStatus("Limit", reason)


@dataclass
class Solution:
    """A solver answer; `values` maps VarKey -> value when status is Optimal."""

    status: SolveStatus
    objective: float = math.nan
    values: Mapping = field(default_factory=dict)
    gap: Optional[float] = None
    wall_time: float = 0.0

    @property
    def is_optimal(self) -> bool:
        return self.status.is_optimal
