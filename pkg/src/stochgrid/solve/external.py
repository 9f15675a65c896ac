"""Subprocess adapter for external MILP solvers.

The command template carries {mps} and {sol} placeholders; the adapter writes
the instance as MPS, runs the command, and parses the documented solution-file
convention:

    status <Optimal|Infeasible|Unbounded>
    objective <number>          (required when status is Optimal)
    <column-name> <value>       (one pair per line; omitted columns are 0)

Column names are the deterministic names write_mps assigned, so values map
straight back through the instance's index.
"""

from __future__ import annotations

import math
import os
import shlex
import shutil
import subprocess
import tempfile
import time
from pathlib import Path
from typing import Optional

from ..errors import ParseError, SolverFailed, SolverNotFound
from ..model import MilpInstance
from .mps import column_name, write_mps
from .types import INFEASIBLE, OPTIMAL, Solution, SolveStatus, UNBOUNDED

# Default command template for the CLI; e.g.
#   STOCHGRID_SOLVER_CMD="python -m stochgrid.solve.scipy_milp {mps} {sol}"
SOLVER_ENV_VAR = "STOCHGRID_SOLVER_CMD"

_STATUS_WORDS = {
    "optimal": OPTIMAL,
    "infeasible": INFEASIBLE,
    "unbounded": UNBOUNDED,
}


def default_solver_command() -> Optional[str]:
    return os.environ.get(SOLVER_ENV_VAR)


def parse_solution_file(path, instance: MilpInstance) -> Solution:
    lines = [ln.strip() for ln in Path(path).read_text().splitlines() if ln.strip()]
    if not lines or not lines[0].lower().startswith("status"):
        raise ParseError(f"{path}: first line must be 'status <...>'")
    word = lines[0].split(None, 1)[1].strip().lower()
    if word.startswith("limit"):
        status = SolveStatus("Limit", word[5:].strip("() ") or None)
    elif word in _STATUS_WORDS:
        status = _STATUS_WORDS[word]
    else:
        raise ParseError(f"{path}: unknown status {word!r}")
    if not status.is_optimal:
        return Solution(status)
    if len(lines) < 2 or not lines[1].lower().startswith("objective"):
        raise ParseError(f"{path}: second line must be 'objective <number>'")
    objective = float(lines[1].split(None, 1)[1])
    names = {column_name(j): j for j in range(instance.num_variables)}
    values = {var.key: 0.0 for var in instance.variables}
    for ln in lines[2:]:
        parts = ln.split()
        if len(parts) != 2:
            raise ParseError(f"{path}: malformed value line {ln!r}")
        name, val = parts
        if name not in names:
            raise ParseError(f"{path}: unknown column {name!r}")
        values[instance.key(names[name])] = float(val)
    return Solution(status, objective, values)


def solve_external(instance: MilpInstance, solver_command_template: str) -> Solution:
    """Solve through a subprocess honoring the {mps}/{sol} template."""
    if "{mps}" not in solver_command_template or "{sol}" not in solver_command_template:
        raise ValueError("solver command template must contain {mps} and {sol}")
    instance.validate_bounds()
    t0 = time.perf_counter()
    with tempfile.TemporaryDirectory(prefix="stochgrid-") as tmp:
        mps_path = Path(tmp) / "model.mps"
        sol_path = Path(tmp) / "model.sol"
        write_mps(instance, mps_path)
        command = solver_command_template.format(mps=str(mps_path), sol=str(sol_path))
        argv = shlex.split(command)
        if not argv:
            raise SolverNotFound("empty solver command")
        if shutil.which(argv[0]) is None and not Path(argv[0]).exists():
            raise SolverNotFound(f"solver executable {argv[0]!r} not found")
        proc = subprocess.run(argv, capture_output=True, text=True)
        if proc.returncode != 0:
            raise SolverFailed(proc.returncode, proc.stderr[-2000:])
        if not sol_path.exists():
            raise SolverFailed(0, "solver produced no solution file")
        solution = parse_solution_file(sol_path, instance)
    solution.wall_time = time.perf_counter() - t0
    return solution


class ExternalBackend:
    def __init__(self, solver_command_template: str):
        self.template = solver_command_template

    def solve(self, instance: MilpInstance) -> Solution:
        return solve_external(instance, self.template)
