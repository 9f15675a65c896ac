import sys
from pathlib import Path

import pytest

from stochgrid.cli import load_run_config, make_scenarios
from stochgrid.model import build_instance
from stochgrid.solve import solve_exact_small

DATA = Path(__file__).resolve().parent.parent / "src" / "stochgrid" / "data"
CONFIGS = DATA / "configs"

SOLVER_TEMPLATE = f"{sys.executable} -m stochgrid.solve.scipy_milp {{mps}} {{sol}}"

# Every Optimal solution produced by the suite's shared fixtures lands here so
# the acceptance module can sweep the constraint-family invariants over all of
# them.  Entries: (label, rc, scenario_set, instance, solution).
SOLVED_REGISTRY = []

# (criterion name, passed) pairs recorded by the acceptance tests and echoed
# one per line after the run.
ACCEPTANCE_RESULTS = []


def record_acceptance(name: str, passed: bool):
    ACCEPTANCE_RESULTS.append((name, passed))


def _load(config_name):
    rc = load_run_config(CONFIGS / f"{config_name}.json")
    sset = make_scenarios(rc)
    instance = build_instance(rc.catalog, sset, rc.study)
    return rc, sset, instance


def _solve_and_register(label):
    rc, sset, instance = _load(label)
    solution = solve_exact_small(instance)
    if solution.is_optimal:
        SOLVED_REGISTRY.append((label, rc, sset, instance, solution))
    return rc, sset, instance, solution


@pytest.fixture(scope="session")
def desk_case():
    """Oracle-equivalence desk instance (3 equipment, T=6, K=2, W=3)."""
    return _load("desk")


@pytest.fixture(scope="session")
def desk_solved():
    return _solve_and_register("desk")


@pytest.fixture(scope="session")
def storage_case():
    return _load("desk_storage")


@pytest.fixture(scope="session")
def storage_solved():
    return _solve_and_register("desk_storage")


@pytest.fixture(scope="session")
def spread_case():
    return _load("desk_spread")


@pytest.fixture(scope="session")
def ptg_case():
    return _load("desk_ptg")


@pytest.fixture(scope="session")
def ptg_solved():
    return _solve_and_register("desk_ptg")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {name}")
