"""Bundled external-solver shim: solve an MPS file with HiGHS via scipy.

Usage:  python -m stochgrid.solve.scipy_milp IN.mps OUT.sol

Reads the MPS dialect this package emits and writes the solution-file
convention the subprocess adapter parses, which makes it a drop-in value for
the {mps}/{sol} solver command template (and the default cross-check for the
hand-built exact solver).
"""

from __future__ import annotations

import sys

import numpy as np

from .mps import read_mps

_STATUS = {0: "Optimal", 2: "Infeasible", 3: "Unbounded"}


def solve_mps(mps_path: str):
    from scipy import optimize, sparse

    data = read_mps(mps_path)
    cols = data.columns
    idx = {name: j for j, name in enumerate(cols)}
    n = len(cols)
    c = np.zeros(n)
    for name, coef in data.objective.items():
        c[idx[name]] = coef
    lb = np.array([data.lb.get(name, 0.0) for name in cols])
    ub = np.array(
        [data.ub.get(name, 1.0 if name in data.integer else np.inf) for name in cols]
    )
    integrality = np.array([1 if name in data.integer else 0 for name in cols])

    rows_i, cols_j, vals = [], [], []
    lo = np.empty(len(data.rows))
    hi = np.empty(len(data.rows))
    for i, (rname, sense) in enumerate(data.rows):
        for cname, coef in data.coeffs[rname].items():
            rows_i.append(i)
            cols_j.append(idx[cname])
            vals.append(coef)
        rhs = data.rhs.get(rname, 0.0)
        lo[i] = -np.inf if sense == "<=" else rhs
        hi[i] = np.inf if sense == ">=" else rhs
    A = sparse.csr_matrix((vals, (rows_i, cols_j)), shape=(len(data.rows), n))

    res = optimize.milp(
        c,
        constraints=optimize.LinearConstraint(A, lo, hi),
        integrality=integrality,
        bounds=optimize.Bounds(lb, ub),
        options={"mip_rel_gap": 1e-9, "presolve": True},
    )
    status = _STATUS.get(res.status, f"Limit({res.status})")
    if status == "Optimal" and res.x is None:
        status = "Infeasible"
    objective = None
    values = {}
    if status == "Optimal":
        x = np.asarray(res.x)
        x = np.where(integrality.astype(bool), np.round(x), x)
        objective = float(c @ x) + data.objective_constant
        values = {name: float(x[j]) for name, j in idx.items()}
    return status, objective, values


def write_solution(sol_path: str, status: str, objective, values):
    lines = [f"status {status}"]
    if status == "Optimal":
        lines.append(f"objective {objective!r}")
        lines.extend(f"{name} {val!r}" for name, val in values.items())
    with open(sol_path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def main(argv=None) -> int:
    argv = argv if argv is not None else sys.argv[1:]
    if len(argv) != 2:
        print("usage: python -m stochgrid.solve.scipy_milp IN.mps OUT.sol", file=sys.stderr)
        return 2
    status, objective, values = solve_mps(argv[0])
    write_solution(argv[1], status, objective, values)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
