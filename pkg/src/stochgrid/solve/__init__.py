"""Solving layer: MPS emission, exact branch-and-bound, external adapter,
and the solution checker."""

from .branch_bound import ExactBackend, SolveLimits, solve_exact_small
from .checker import CheckReport, Violation, check_solution
from .external import (
    SOLVER_ENV_VAR,
    ExternalBackend,
    default_solver_command,
    parse_solution_file,
    solve_external,
)
from .mps import LpData, lp_to_instance, read_mps, write_mps
from .types import INFEASIBLE, OPTIMAL, Solution, SolveStatus, UNBOUNDED, limit

__all__ = [
    "CheckReport",
    "ExactBackend",
    "ExternalBackend",
    "INFEASIBLE",
    "LpData",
    "OPTIMAL",
    "Solution",
    "SolveLimits",
    "SolveStatus",
    "SOLVER_ENV_VAR",
    "UNBOUNDED",
    "Violation",
    "check_solution",
    "default_solver_command",
    "limit",
    "lp_to_instance",
    "parse_solution_file",
    "read_mps",
    "solve_exact_small",
    "solve_external",
    "write_mps",
]
