import math

import numpy as np
import pytest

from stochgrid.errors import LimitExceeded
from stochgrid.model import Constraint, MilpInstance, Variable, VarKey
from stochgrid.solve import SolveLimits, solve_exact_small

import helpers

INF = math.inf


def make_instance(c, rows, bounds, integers, constant=0.0):
    variables = [
        Variable(VarKey("x", equip=f"v{j}"), lb, ub, j in integers)
        for j, (lb, ub) in enumerate(bounds)
    ]
    constraints = [
        Constraint(f"r{i}", {j: coef for j, coef in enumerate(row) if coef},
                   sense, rhs)
        for i, (row, sense, rhs) in enumerate(rows)
    ]
    objective = {j: coef for j, coef in enumerate(c) if coef}
    return MilpInstance(variables, constraints, objective, constant)


def test_binary_knapsack_toy():
    # min x+y s.t. x+y >= 1, x binary, y >= 0 continuous: optimum 1
    inst = make_instance([1, 1], [([1, 1], ">=", 1.0)], [(0, 1), (0, INF)], {0})
    sol = solve_exact_small(inst)
    assert sol.status.kind == "Optimal"
    assert sol.objective == pytest.approx(1.0, abs=1e-9)


def test_infeasible_toy():
    inst = make_instance([1], [([1], ">=", 2.0), ([1], "<=", 1.0)], [(0, INF)], set())
    sol = solve_exact_small(inst)
    assert sol.status.kind == "Infeasible"


def test_contradictory_bounds_are_infeasible():
    inst = make_instance([1], [], [(2.0, 1.0)], set())
    assert solve_exact_small(inst).status.kind == "Infeasible"


def test_unbounded():
    inst = make_instance([-1], [], [(0, INF)], set())
    assert solve_exact_small(inst).status.kind == "Unbounded"


def test_binary_forces_integer_optimum():
    # LP relaxation would take x=0.5: min 3x + 2y, y >= 1 - x, x binary,
    # y <= 0.4 forces x = 1
    inst = make_instance(
        [3, 2], [([1, 1], ">=", 1.0)], [(0, 1), (0, 0.4)], {0}
    )
    sol = solve_exact_small(inst)
    assert sol.status.kind == "Optimal"
    assert sol.values[VarKey("x", equip="v0")] == 1.0
    assert sol.objective == pytest.approx(3.0, abs=1e-9)


def test_limits_enforced():
    inst = make_instance([1, 1], [], [(0, 1), (0, 1)], {0, 1})
    with pytest.raises(LimitExceeded):
        solve_exact_small(inst, SolveLimits(max_binaries=1))
    with pytest.raises(LimitExceeded):
        solve_exact_small(inst, SolveLimits(max_columns=1))


def test_general_integers_rejected():
    inst = make_instance([1], [], [(0, 5)], {0})
    with pytest.raises(LimitExceeded):
        solve_exact_small(inst)


def test_determinism(desk_case):
    rc, sset, instance = desk_case
    s1 = solve_exact_small(instance)
    s2 = solve_exact_small(instance)
    assert s1.status == s2.status
    assert s1.objective == s2.objective
    assert s1.values == s2.values
    assert s1.gap == 0.0


@pytest.mark.parametrize("seed", range(10))
def test_random_milps_match_scipy(seed):
    rng = np.random.default_rng(100 + seed)
    n = int(rng.integers(3, 9))
    m = int(rng.integers(2, 7))
    nbin = int(rng.integers(1, min(n, 5) + 1))
    c = rng.normal(size=n).round(3)
    A = (rng.normal(size=(m, n)) * (rng.random((m, n)) < 0.7)).round(3)
    senses = [str(rng.choice(["<=", ">=", "="])) for _ in range(m)]
    rhs = rng.normal(scale=2, size=m).round(3)
    bounds = []
    for j in range(n):
        if j < nbin:
            bounds.append((0.0, 1.0))
        else:
            bounds.append((0.0, round(float(rng.uniform(1, 8)), 3)))
    inst = make_instance(c, list(zip(A.tolist(), senses, rhs.tolist())), bounds,
                         set(range(nbin)))
    mine = solve_exact_small(inst)
    status, objective, _ = helpers.scipy_milp_solve(inst)
    assert mine.status.kind == status
    if status == "Optimal":
        assert mine.objective == pytest.approx(objective, rel=1e-6, abs=1e-6)


def test_time_limit_returns_limit_status(desk_case):
    rc, sset, instance = desk_case
    sol = solve_exact_small(instance, SolveLimits(time=0.0))
    assert sol.status.kind in ("Limit", "Optimal")
    # with a zero budget the search must stop at the first check
    assert sol.status.kind == "Limit"
    assert sol.status.reason == "time"
