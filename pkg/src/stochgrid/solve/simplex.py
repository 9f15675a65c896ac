"""Dense two-phase primal simplex for desk-scale LPs.

The tableau method with explicit upper-bound rows: general bounds are reduced
to x >= 0 by shifting/mirroring/splitting, finite upper bounds become extra
rows, and equality rows get artificial variables in phase 1.  Pivoting uses
Dantzig's rule and switches permanently to Bland's rule after a degenerate
stall, which keeps the method finite.  The final basic solution is re-solved
against the unpivoted system (with one step of iterative refinement) so
accumulated tableau drift does not leak into the reported point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

INF = math.inf

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

_PIVOT_TOL = 1e-9
_FEAS_TOL = 1e-7
_STALL_LIMIT = 300
_MAX_ITER = 200_000


@dataclass
class LpResult:
    status: str
    x: Optional[np.ndarray] = None
    objective: float = math.nan


def _pivot(tableau: np.ndarray, row: int, col: int):
    piv = tableau[row, col]
    tableau[row] /= piv
    factors = tableau[:, col].copy()
    factors[row] = 0.0
    tableau -= np.outer(factors, tableau[row])


def _run_simplex(tableau, basis, cost_row, ncols, blocked):
    """Minimize cost_row over the tableau; returns 'optimal' or 'unbounded'.

    `blocked` marks columns that may never enter (artificials in phase 2).
    """
    m = len(basis)
    rc_scale = max(1.0, float(np.max(np.abs(cost_row[:ncols])))) if ncols else 1.0
    rc_tol = 1e-9 * rc_scale
    use_bland = False
    stall = 0
    last_obj = cost_row[-1]
    for _ in range(_MAX_ITER):
        rc = cost_row[:ncols]
        if use_bland:
            candidates = np.nonzero((rc < -rc_tol) & ~blocked[:ncols])[0]
            if candidates.size == 0:
                return OPTIMAL
            col = int(candidates[0])
        else:
            masked = np.where(blocked[:ncols], 0.0, rc)
            col = int(np.argmin(masked))
            if masked[col] >= -rc_tol:
                return OPTIMAL
        column = tableau[:m, col]
        positive = column > _PIVOT_TOL
        if not positive.any():
            return UNBOUNDED
        ratios = np.full(m, INF)
        ratios[positive] = tableau[:m, -1][positive] / column[positive]
        best = ratios.min()
        # smallest basis index among ties: deterministic and anti-cycling
        ties = np.nonzero(ratios <= best + 1e-12 * (1.0 + abs(best)))[0]
        row = int(min(ties, key=lambda r: basis[r]))
        _pivot(tableau, row, col)
        cost_row -= cost_row[col] * tableau[row]
        basis[row] = col
        if not use_bland:
            # cost_row[-1] carries minus the objective, so progress means it
            # strictly increases; a long flat run signals degenerate cycling.
            obj = cost_row[-1]
            if obj <= last_obj + 1e-12 * (1.0 + abs(last_obj)):
                stall += 1
                if stall >= _STALL_LIMIT:
                    use_bland = True
            else:
                stall = 0
            last_obj = obj
    raise RuntimeError("simplex iteration limit exceeded")


def solve_lp(c, A, senses, rhs, lb, ub):
    """Minimize c @ x subject to A x (sense) rhs and lb <= x <= ub.

    senses is a sequence of "<=", ">=", "=" per row.  Returns an LpResult;
    x covers the original variables.
    """
    c = np.asarray(c, float)
    A = np.asarray(A, float)
    rhs = np.asarray(rhs, float)
    lb = np.asarray(lb, float)
    ub = np.asarray(ub, float)
    n = c.size
    m0 = A.shape[0] if A.size else 0
    if m0 == 0:
        A = A.reshape(0, n)

    if np.any(lb > ub + 1e-12):
        return LpResult(INFEASIBLE)

    # Substitute out fixed columns.
    fixed = np.isfinite(lb) & np.isfinite(ub) & (ub - lb <= 1e-11)
    free_idx = np.nonzero(~fixed)[0]
    x_full = np.zeros(n)
    x_full[fixed] = lb[fixed]
    const = float(c[fixed] @ lb[fixed])
    b_eff = rhs - A[:, fixed] @ lb[fixed] if fixed.any() else rhs.copy()

    if free_idx.size == 0:
        for i in range(m0):
            lhs, s = 0.0, senses[i]
            viol = (
                (s == "<=" and lhs > b_eff[i] + _FEAS_TOL)
                or (s == ">=" and lhs < b_eff[i] - _FEAS_TOL)
                or (s == "=" and abs(lhs - b_eff[i]) > _FEAS_TOL)
            )
            if viol:
                return LpResult(INFEASIBLE)
        return LpResult(OPTIMAL, x_full, const)

    cf = c[free_idx].copy()
    Af = A[:, free_idx].copy()
    lbf, ubf = lb[free_idx].copy(), ub[free_idx].copy()

    # Reduce to y >= 0: shift finite lower bounds, mirror upper-bounded free
    # columns, split doubly-free columns into y+ - y-.
    nf = free_idx.size
    sign = np.ones(nf)
    offset = np.zeros(nf)
    upper = np.full(nf, INF)
    split = []
    for j in range(nf):
        if np.isfinite(lbf[j]):
            offset[j] = lbf[j]
            if np.isfinite(ubf[j]):
                upper[j] = ubf[j] - lbf[j]
        elif np.isfinite(ubf[j]):
            sign[j] = -1.0
            offset[j] = ubf[j]
        else:
            split.append(j)
    b_eff = b_eff - Af @ offset
    Af = Af * sign
    cf_t = cf * sign
    const += float(cf @ offset)
    if split:
        Af = np.hstack([Af, -Af[:, split]])
        cf_t = np.concatenate([cf_t, -cf_t[split]])
        upper = np.concatenate([upper, np.full(len(split), INF)])
    ny = Af.shape[1]

    rows = [Af]
    bvec = [b_eff]
    sense_list = list(senses)
    for j in np.nonzero(np.isfinite(upper))[0]:
        e = np.zeros((1, ny))
        e[0, j] = 1.0
        rows.append(e)
        bvec.append(np.array([upper[j]]))
        sense_list.append("<=")
    A_std = np.vstack(rows) if rows else np.zeros((0, ny))
    b_std = np.concatenate(bvec) if bvec else np.zeros(0)
    m = A_std.shape[0]

    # Row equilibration keeps pivot selection well scaled.
    row_scale = np.maximum(np.abs(A_std).max(axis=1, initial=0.0), 1e-12)
    A_std = A_std / row_scale[:, None]
    b_std = b_std / row_scale

    # Slack columns, then sign-normalize to b >= 0.
    slack_cols = []
    slack_sign = np.zeros(m)
    for i, s in enumerate(sense_list):
        if s == "<=":
            slack_sign[i] = 1.0
            slack_cols.append(i)
        elif s == ">=":
            slack_sign[i] = -1.0
            slack_cols.append(i)
    n_slack = len(slack_cols)
    S = np.zeros((m, n_slack))
    for jj, i in enumerate(slack_cols):
        S[i, jj] = slack_sign[i]
    flip = b_std < 0
    A_std[flip] *= -1.0
    b_std[flip] *= -1.0
    S[flip] *= -1.0

    # Basis: slack columns that survived normalization with +1; artificials fill
    # the remaining rows.
    body = np.hstack([A_std, S])
    ncols_body = ny + n_slack
    basis = np.full(m, -1, dtype=int)
    for jj, i in enumerate(slack_cols):
        if S[i, jj] == 1.0:
            basis[i] = ny + jj
    art_rows = np.nonzero(basis < 0)[0]
    n_art = art_rows.size
    Art = np.zeros((m, n_art))
    for jj, i in enumerate(art_rows):
        Art[i, jj] = 1.0
        basis[i] = ncols_body + jj
    ncols = ncols_body + n_art

    tableau = np.zeros((m, ncols + 1))
    tableau[:, :ncols_body] = body
    if n_art:
        tableau[:, ncols_body:ncols] = Art
    tableau[:, -1] = b_std
    A_frozen = tableau[:, :ncols].copy()
    b_frozen = b_std.copy()

    blocked = np.zeros(ncols, dtype=bool)

    # Phase 1: drive artificial variables to zero.
    if n_art:
        cost1 = np.zeros(ncols + 1)
        cost1[ncols_body:ncols] = 1.0
        for i in art_rows:
            cost1 -= tableau[i]
        status = _run_simplex(tableau, basis, cost1, ncols, blocked)
        if status != OPTIMAL:
            raise RuntimeError("phase-1 simplex failed to terminate cleanly")
        if -cost1[-1] > _FEAS_TOL:
            return LpResult(INFEASIBLE)
        # Pivot remaining artificials out of the basis where possible.
        for i in range(m):
            if basis[i] >= ncols_body:
                row_entries = np.abs(tableau[i, :ncols_body])
                col = int(np.argmax(row_entries))
                if row_entries[col] > _PIVOT_TOL:
                    _pivot(tableau, i, col)
                    basis[i] = col
        blocked[ncols_body:ncols] = True

    # Phase 2.
    cost2 = np.zeros(ncols + 1)
    cost2[:ny] = cf_t
    for i in range(m):
        if basis[i] < ncols and cost2[basis[i]] != 0.0:
            cost2 -= cost2[basis[i]] * tableau[i]
    status = _run_simplex(tableau, basis, cost2, ncols, blocked)
    if status == UNBOUNDED:
        return LpResult(UNBOUNDED)

    # Recover the basic solution against the frozen system and refine once.
    y = np.zeros(ncols)
    y[basis] = tableau[:m, -1]
    B = A_frozen[:, basis]
    try:
        xb = np.linalg.solve(B, b_frozen)
        resid = b_frozen - B @ xb
        xb = xb + np.linalg.solve(B, resid)
        cand = np.zeros(ncols)
        cand[basis] = xb
        if np.max(np.abs(b_frozen - A_frozen @ cand), initial=0.0) <= max(
            np.max(np.abs(b_frozen - A_frozen @ y), initial=0.0), 1e-14
        ):
            y = cand
    except np.linalg.LinAlgError:
        pass
    y = np.where(np.abs(y) < 1e-11, 0.0, y)

    y_vars = y[:ny]
    if split:
        base = y_vars[:nf].copy()
        for pos, j in enumerate(split):
            base[j] = base[j] - y_vars[nf + pos]
        y_vars = base
    else:
        y_vars = y_vars[:nf]
    x_free = sign * y_vars + offset
    x_full[free_idx] = x_free
    objective = float(c @ x_full)
    return LpResult(OPTIMAL, x_full, objective)
