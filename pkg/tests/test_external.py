import math
import stat
import sys

import pytest

from stochgrid.errors import BoundError, ParseError, SolverFailed, SolverNotFound
from stochgrid.model import Constraint, MilpInstance, Variable, VarKey
from stochgrid.solve import check_solution, parse_solution_file, solve_exact_small, solve_external

from conftest import SOLVER_TEMPLATE

INF = math.inf


def small_instance():
    variables = [
        Variable(VarKey("x", equip="a"), 0.0, 1.0, True),
        Variable(VarKey("x", equip="b"), 0.0, INF, False),
    ]
    constraints = [Constraint("r", {0: 1.0, 1: 1.0}, ">=", 1.5)]
    return MilpInstance(variables, constraints, {0: 1.0, 1: 2.0}, 0.0)


def test_scipy_shim_matches_exact_solver():
    inst = small_instance()
    mine = solve_exact_small(inst)
    ext = solve_external(inst, SOLVER_TEMPLATE)
    assert ext.status.kind == "Optimal"
    assert ext.objective == pytest.approx(mine.objective, rel=1e-6)
    assert check_solution(inst, ext).ok


def test_contradictory_bounds_pre_rejected():
    inst = MilpInstance([Variable(VarKey("x", equip="a"), 2.0, 1.0, False)], [], {}, 0.0)
    with pytest.raises(BoundError):
        solve_external(inst, SOLVER_TEMPLATE)


def test_missing_executable():
    with pytest.raises(SolverNotFound):
        solve_external(small_instance(), "/no/such/solver-binary {mps} {sol}")


def test_bad_template_rejected():
    with pytest.raises(ValueError):
        solve_external(small_instance(), "solver --in {mps}")


def test_solver_failure_surfaces_exit_code(tmp_path):
    script = tmp_path / "failing.sh"
    script.write_text("#!/bin/sh\necho boom >&2\nexit 7\n")
    script.chmod(script.stat().st_mode | stat.S_IEXEC)
    with pytest.raises(SolverFailed) as err:
        solve_external(small_instance(), f"{script} {{mps}} {{sol}}")
    assert err.value.exit_code == 7
    assert "boom" in err.value.stderr_excerpt


def test_garbage_solution_file_is_parse_error(tmp_path):
    script = tmp_path / "garbage.sh"
    script.write_text('#!/bin/sh\necho "gibberish" > "$2"\n')
    script.chmod(script.stat().st_mode | stat.S_IEXEC)
    with pytest.raises(ParseError):
        solve_external(small_instance(), f"{script} {{mps}} {{sol}}")


def test_no_solution_file_is_solver_failed(tmp_path):
    script = tmp_path / "silent.sh"
    script.write_text("#!/bin/sh\nexit 0\n")
    script.chmod(script.stat().st_mode | stat.S_IEXEC)
    with pytest.raises(SolverFailed):
        solve_external(small_instance(), f"{script} {{mps}} {{sol}}")


def test_parse_infeasible_status(tmp_path):
    path = tmp_path / "sol.txt"
    path.write_text("status Infeasible\n")
    sol = parse_solution_file(path, small_instance())
    assert sol.status.kind == "Infeasible"
    assert not sol.is_optimal


def test_parse_optimal_with_missing_values_defaults_zero(tmp_path):
    path = tmp_path / "sol.txt"
    path.write_text("status Optimal\nobjective 3.5\nx0000000 1\n")
    sol = parse_solution_file(path, small_instance())
    assert sol.objective == 3.5
    assert sol.values[VarKey("x", equip="a")] == 1.0
    assert sol.values[VarKey("x", equip="b")] == 0.0


def test_parse_unknown_column_rejected(tmp_path):
    path = tmp_path / "sol.txt"
    path.write_text("status Optimal\nobjective 0\nx9999999 1\n")
    with pytest.raises(ParseError):
        parse_solution_file(path, small_instance())


def test_infeasible_instance_through_shim():
    variables = [Variable(VarKey("x", equip="a"), 0.0, 1.0, False)]
    constraints = [Constraint("r", {0: 1.0}, ">=", 2.0)]
    inst = MilpInstance(variables, constraints, {0: 1.0}, 0.0)
    sol = solve_external(inst, SOLVER_TEMPLATE)
    assert sol.status.kind == "Infeasible"
