import math

import pytest

from stochgrid.model import Constraint, MilpInstance, Variable, VarKey
from stochgrid.solve import lp_to_instance, read_mps, solve_exact_small, write_mps

INF = math.inf


def tiny_instance():
    variables = [Variable(VarKey("x", equip="only"), 0.0, INF, False)]
    constraints = [Constraint("cap", {0: 1.0}, "<=", 5.0)]
    return MilpInstance(variables, constraints, {0: -1.0}, 0.0, name="tiny")


def test_section_skeleton(tmp_path):
    path = tmp_path / "tiny.mps"
    write_mps(tiny_instance(), path)
    text = path.read_text()
    lines = text.splitlines()
    assert lines[0].startswith("NAME")
    for section in ("ROWS", "COLUMNS", "RHS", "RANGES", "BOUNDS", "ENDATA"):
        assert any(ln == section for ln in lines)
    rows_idx = lines.index("ROWS")
    cols_idx = lines.index("COLUMNS")
    row_lines = lines[rows_idx + 1:cols_idx]
    assert row_lines == [" N  OBJ", " L  c0000000"]


def test_byte_identical_writes(tmp_path, desk_case):
    rc, sset, instance = desk_case
    a, b = tmp_path / "a.mps", tmp_path / "b.mps"
    write_mps(instance, a)
    write_mps(instance, b)
    assert a.read_bytes() == b.read_bytes()


def test_integer_markers_wrap_binary_runs(tmp_path, desk_case):
    rc, sset, instance = desk_case
    path = tmp_path / "desk.mps"
    write_mps(instance, path)
    text = path.read_text()
    assert text.count("'INTORG'") == text.count("'INTEND'")
    assert text.count("'INTORG'") >= 1


def test_round_trip_objective_exact(tmp_path, desk_case):
    rc, sset, instance = desk_case
    path = tmp_path / "desk.mps"
    write_mps(instance, path)
    rebuilt = lp_to_instance(read_mps(path))
    assert rebuilt.num_variables == instance.num_variables
    assert rebuilt.num_constraints == instance.num_constraints
    s1 = solve_exact_small(instance)
    s2 = solve_exact_small(rebuilt)
    assert s2.objective == s1.objective  # exact, not approx


def test_round_trip_bounds_and_constant(tmp_path):
    variables = [
        Variable(VarKey("x", equip="a"), 0.0, 1.0, True),
        Variable(VarKey("x", equip="b"), -2.5, 7.5, False),
        Variable(VarKey("x", equip="c"), 3.0, 3.0, False),
        Variable(VarKey("x", equip="d"), -INF, INF, False),
        Variable(VarKey("x", equip="e"), -INF, 4.0, False),
    ]
    constraints = [
        Constraint("r0", {0: 1.0, 1: 2.0, 3: 1.0}, "<=", 4.0),
        Constraint("r1", {1: 1.0, 2: -1.0, 4: 0.25}, ">=", -1.0),
        Constraint("r2", {3: 1.0, 4: 1.0}, "=", 0.5),
    ]
    inst = MilpInstance(variables, constraints, {0: 1.0, 1: 0.125, 3: -0.5},
                        objective_constant=12.25, name="bounds")
    path_data = read_write(inst)
    assert path_data.objective_constant == 12.25
    rebuilt = lp_to_instance(path_data)
    for orig, new in zip(inst.variables, rebuilt.variables):
        assert new.lb == orig.lb
        assert new.ub == orig.ub
        assert new.integer == orig.integer
    for orig, new in zip(inst.constraints, rebuilt.constraints):
        assert new.sense == orig.sense
        assert new.rhs == orig.rhs
    s1, s2 = solve_exact_small(inst), solve_exact_small(rebuilt)
    assert s1.objective == s2.objective


def read_write(inst, tmp_path=None):
    import tempfile
    from pathlib import Path

    with tempfile.TemporaryDirectory() as tmp:
        path = Path(tmp) / "m.mps"
        write_mps(inst, path)
        return read_mps(path)


def test_shortest_repr_numbers_survive(tmp_path):
    value = 1.0 / 3.0 * 365 * 0.5  # a long-mantissa coefficient
    inst = MilpInstance(
        [Variable(VarKey("x", equip="v"), 0.0, INF, False)],
        [Constraint("r", {0: value}, ">=", value)],
        {0: value},
        0.0,
    )
    data = read_write(inst)
    assert data.coeffs["c0000000"]["x0000000"] == value
    assert data.objective["x0000000"] == value


def test_empty_column_still_declared(tmp_path):
    inst = MilpInstance(
        [Variable(VarKey("x", equip="used"), 0.0, 1.0, False),
         Variable(VarKey("x", equip="orphan"), 0.0, 2.0, False)],
        [Constraint("r", {0: 1.0}, "<=", 1.0)],
        {0: 1.0},
        0.0,
    )
    data = read_write(inst)
    assert data.columns == ["x0000000", "x0000001"]
