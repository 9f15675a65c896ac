"""Independent oracles and physics checks used across the test suite.

Everything here recomputes quantities from first principles (catalog rates,
profiles, scenario data) rather than reading the instance's rows, so it stays
an independent route from the code it verifies.
"""

from __future__ import annotations

import numpy as np

from stochgrid.model import VarKey


def scipy_lp(c, A, senses, rhs, lb, ub):
    """Reference LP solve via scipy's HiGHS wrapper."""
    from scipy.optimize import linprog

    A = np.asarray(A, float)
    A_ub, b_ub, A_eq, b_eq = [], [], [], []
    for i, s in enumerate(senses):
        if s == "<=":
            A_ub.append(A[i])
            b_ub.append(rhs[i])
        elif s == ">=":
            A_ub.append(-A[i])
            b_ub.append(-rhs[i])
        else:
            A_eq.append(A[i])
            b_eq.append(rhs[i])
    kw = {}
    if A_ub:
        kw["A_ub"], kw["b_ub"] = np.array(A_ub), np.array(b_ub)
    if A_eq:
        kw["A_eq"], kw["b_eq"] = np.array(A_eq), np.array(b_eq)
    return linprog(c, bounds=list(zip(lb, ub)), method="highs", **kw)


def scipy_milp_solve(instance):
    """Reference MILP solve via scipy.optimize.milp (HiGHS)."""
    from scipy import optimize, sparse

    n = instance.num_variables
    c = np.zeros(n)
    for j, coef in instance.objective.items():
        c[j] = coef
    rows_i, cols_j, vals = [], [], []
    lo, hi = [], []
    for i, row in enumerate(instance.constraints):
        for j, coef in row.coeffs.items():
            rows_i.append(i)
            cols_j.append(j)
            vals.append(coef)
        lo.append(-np.inf if row.sense == "<=" else row.rhs)
        hi.append(np.inf if row.sense == ">=" else row.rhs)
    A = sparse.csr_matrix((vals, (rows_i, cols_j)), shape=(len(instance.constraints), n))
    lb = np.array([v.lb for v in instance.variables])
    ub = np.array([v.ub for v in instance.variables])
    integrality = np.array([1 if v.integer else 0 for v in instance.variables])
    res = optimize.milp(
        c,
        constraints=optimize.LinearConstraint(A, np.array(lo), np.array(hi)),
        integrality=integrality,
        bounds=optimize.Bounds(lb, ub),
        options={"mip_rel_gap": 1e-9},
    )
    status = {0: "Optimal", 2: "Infeasible", 3: "Unbounded"}.get(res.status, "Limit")
    objective = None
    if status == "Optimal" and res.x is not None:
        objective = float(c @ res.x) + instance.objective_constant
    return status, objective, res.x


def val(solution, **kw):
    return solution.values.get(VarKey(**kw), 0.0)


def physics_violations(rc, sset, solution, tol=1e-6):
    """Check the constraint-family invariants of an Optimal solution from
    first principles; returns a list of human-readable violations."""
    catalog, config = rc.catalog, rc.study
    grid = sset.grid
    K, T = grid.years, grid.intervals_per_day
    dt = grid.delta_t
    problems = []

    gens = catalog.generators()
    stors = catalog.storages()
    renews = catalog.renewables()
    resources = sorted(
        {r for s in catalog.equipment for r in (*s.gen, *s.cons)}
        | {"Electricity", "CO2"}
        | {r for scen in sset.scenarios for r, arr in scen.base.demand.items()
           if np.any(arr != 0)}
    )

    if config.relax_elec_purchase_cap or config.elec_purchase_cap is None:
        u_cap = np.inf
    else:
        u_cap = config.elec_purchase_cap / dt

    for w, scen in enumerate(sset.scenarios, start=1):
        for k in range(1, K + 1):
            # storage: periodicity, SOC window+recursion, mutual exclusion
            for spec in stors:
                net = 0.0
                cap = val(solution, symbol="b", equip=spec.id)
                for t in range(1, T + 1):
                    pch = val(solution, symbol="pch", equip=spec.id, k=k, t=t, w=w)
                    pdch = val(solution, symbol="pdch", equip=spec.id, k=k, t=t, w=w)
                    soc = val(solution, symbol="soc", equip=spec.id, k=k, t=t, w=w)
                    prev = val(solution, symbol="soc", equip=spec.id, k=k,
                               t=t - 1 if t > 1 else T, w=w)
                    net += dt * (pch - pdch)
                    if pch * pdch > tol:
                        problems.append(f"simultaneous charge/discharge {spec.id} k{k} t{t} w{w}")
                    if not (0.2 * cap - tol <= soc <= 0.8 * cap + tol):
                        problems.append(f"soc window {spec.id} k{k} t{t} w{w}: {soc} vs cap {cap}")
                    if abs(soc - prev - dt * (pch - pdch)) > tol:
                        problems.append(f"soc recursion {spec.id} k{k} t{t} w{w}")
                if abs(net) > tol:
                    problems.append(f"soc periodicity {spec.id} k{k} w{w}: net {net}")
            # emission cap
            yx_co2 = sum(
                val(solution, symbol="yx", resource="CO2", k=k, t=t, w=w)
                for t in range(1, T + 1)
            )
            load = sum(
                float(scen.base.demand["Electricity"][k - 1, t - 1])
                for t in range(1, T + 1)
            ) if "Electricity" in scen.base.demand else 0.0
            if yx_co2 > scen.emission_limit.value(k) * load + tol:
                problems.append(f"emission cap k{k} w{w}: {yx_co2}")
            # balances and purchase caps
            for t in range(1, T + 1):
                for n in resources:
                    lhs = 0.0
                    for spec in gens:
                        p = val(solution, symbol="p", equip=spec.id, k=k, t=t, w=w)
                        lhs += (spec.gen.get(n, 0.0) - spec.cons.get(n, 0.0)) * p
                    for spec in stors:
                        lhs += spec.gen.get(n, 0.0) * val(
                            solution, symbol="pdch", equip=spec.id, k=k, t=t, w=w)
                        lhs -= spec.cons.get(n, 0.0) * val(
                            solution, symbol="pch", equip=spec.id, k=k, t=t, w=w)
                    for spec in renews:
                        netg = spec.gen.get(n, 0.0) - spec.cons.get(n, 0.0)
                        if netg:
                            avail = float(scen.availability(spec.id)[k - 1, t - 1])
                            lhs += netg * avail * val(solution, symbol="rp", equip=spec.id)
                    u = val(solution, symbol="u", resource=n, k=k, t=t, w=w)
                    yx = val(solution, symbol="yx", resource=n, k=k, t=t, w=w)
                    sp = val(solution, symbol="sp", resource=n, k=k, w=w)
                    demand = scen.base.demand.get(n)
                    d = float(demand[k - 1, t - 1]) if demand is not None else 0.0
                    if abs(lhs + u - yx - sp - d) > tol:
                        problems.append(f"balance {n} k{k} t{t} w{w}: residual {lhs + u - yx - sp - d}")
                    if n == "Electricity" and u > u_cap + tol:
                        problems.append(f"purchase cap k{k} t{t} w{w}: {u} > {u_cap}")
                    if n in ("Heat", "H2", "CO2") and not config.is_purchasable(n) and u > tol:
                        problems.append(f"forbidden purchase {n} k{k} t{t} w{w}: {u}")
    return problems
