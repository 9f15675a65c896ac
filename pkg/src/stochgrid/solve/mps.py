"""MPS emission and parsing.

The writer produces a deterministic fixed-layout MPS file: 8-character row and
column names assigned from the instance's canonical ordering, integer columns
wrapped in INTORG/INTEND markers, and the objective constant carried as an RHS
entry on the objective row (negated, per convention).  Numeric fields use the
shortest round-trip decimal form so a parse reconstructs every coefficient
bit-exactly; fields may exceed the historical 12-character width, which every
current solver's reader accepts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from ..errors import IoError, ParseError
from ..model import Constraint, MilpInstance, Variable, VarKey

INF = math.inf

_SENSE_TO_MPS = {"<=": "L", ">=": "G", "=": "E"}
_MPS_TO_SENSE = {"L": "<=", "G": ">=", "E": "="}

OBJ_ROW = "OBJ"


def column_name(j: int) -> str:
    return f"x{j:07d}"


def row_name(i: int) -> str:
    return f"c{i:07d}"


def _num(value: float) -> str:
    if value == 0:
        return "0"
    r = repr(float(value))
    return r


def _entry(field1: str, name1: str, name2: str = "", value: Optional[float] = None) -> str:
    line = f" {field1:<2} {name1:<10}"
    if name2:
        line += f"{name2:<10}"
    if value is not None:
        line += f"{_num(value)}"
    return line.rstrip()


def write_mps(instance: MilpInstance, path) -> None:
    """Write the instance; byte-identical output for identical instances."""
    lines = [f"NAME          {instance.name.upper()[:8] or 'MODEL'}", "ROWS",
             f" N  {OBJ_ROW}"]
    for i, row in enumerate(instance.constraints):
        lines.append(f" {_SENSE_TO_MPS[row.sense]}  {row_name(i)}")

    by_col = [[] for _ in range(instance.num_variables)]
    for i, row in enumerate(instance.constraints):
        for j, coef in sorted(row.coeffs.items()):
            by_col[j].append((i, coef))

    lines.append("COLUMNS")
    in_integer = False
    marker = 0
    for j, var in enumerate(instance.variables):
        if var.integer != in_integer:
            tag = "'INTORG'" if var.integer else "'INTEND'"
            lines.append(f"    MARKER{marker:04d}  'MARKER'                 {tag}")
            marker += 1
            in_integer = var.integer
        name = column_name(j)
        entries = []
        obj_coef = instance.objective.get(j, 0.0)
        if obj_coef != 0.0:
            entries.append((OBJ_ROW, obj_coef))
        entries.extend((row_name(i), coef) for i, coef in by_col[j])
        if not entries:
            entries.append((OBJ_ROW, 0.0))
        for rname, coef in entries:
            lines.append(f"    {name:<10}{rname:<10}{_num(coef)}")
    if in_integer:
        lines.append(f"    MARKER{marker:04d}  'MARKER'                 'INTEND'")

    lines.append("RHS")
    if instance.objective_constant != 0.0:
        lines.append(f"    RHS1      {OBJ_ROW:<10}{_num(-instance.objective_constant)}")
    for i, row in enumerate(instance.constraints):
        if row.rhs != 0.0:
            lines.append(f"    RHS1      {row_name(i):<10}{_num(row.rhs)}")

    lines.append("RANGES")

    lines.append("BOUNDS")
    for j, var in enumerate(instance.variables):
        name = column_name(j)
        if var.lb == var.ub:
            lines.append(f" FX BND1      {name:<10}{_num(var.lb)}")
            continue
        if var.lb == -INF:
            lines.append(f" MI BND1      {name:<10}")
        elif var.lb != 0.0:
            lines.append(f" LO BND1      {name:<10}{_num(var.lb)}")
        if var.ub == INF:
            if var.lb == -INF or var.integer:
                lines.append(f" PL BND1      {name:<10}")
        else:
            lines.append(f" UP BND1      {name:<10}{_num(var.ub)}")

    lines.append("ENDATA")
    try:
        Path(path).write_text("\n".join(lines) + "\n", encoding="ascii")
    except OSError as exc:
        raise IoError(f"cannot write MPS file {path}: {exc}") from exc


@dataclass
class LpData:
    """A parsed MPS problem in array-of-dicts form."""

    name: str = "MODEL"
    columns: list = field(default_factory=list)  # column names in file order
    lb: dict = field(default_factory=dict)
    ub: dict = field(default_factory=dict)
    integer: set = field(default_factory=set)
    rows: list = field(default_factory=list)  # (name, sense)
    coeffs: dict = field(default_factory=dict)  # row name -> {col name: coef}
    objective: dict = field(default_factory=dict)  # col name -> coef
    objective_constant: float = 0.0
    rhs: dict = field(default_factory=dict)
    objective_row: str = OBJ_ROW


def read_mps(path) -> LpData:
    """Parse the dialect write_mps emits (plus LO/UP/FX/MI/PL/BV bounds)."""
    data = LpData()
    section = None
    in_integer = False
    row_senses = {}
    seen_cols = set()
    for lineno, raw in enumerate(Path(path).read_text(encoding="ascii").splitlines(), 1):
        if not raw.strip() or raw.lstrip().startswith("*"):
            continue
        if not raw[0].isspace():
            parts = raw.split()
            section = parts[0].upper()
            if section == "NAME" and len(parts) > 1:
                data.name = parts[1]
            if section == "ENDATA":
                break
            continue
        parts = raw.split()
        if section == "ROWS":
            sense, name = parts[0].upper(), parts[1]
            if sense == "N":
                data.objective_row = name
            elif sense in _MPS_TO_SENSE:
                data.rows.append((name, _MPS_TO_SENSE[sense]))
                row_senses[name] = sense
                data.coeffs[name] = {}
            else:
                raise ParseError(f"{path}:{lineno}: unknown row sense {sense!r}")
        elif section == "COLUMNS":
            if len(parts) >= 3 and parts[1] == "'MARKER'":
                in_integer = parts[2] == "'INTORG'"
                continue
            col = parts[0]
            if col not in seen_cols:
                seen_cols.add(col)
                data.columns.append(col)
                if in_integer:
                    data.integer.add(col)
            for rname, val in zip(parts[1::2], parts[2::2]):
                coef = float(val)
                if rname == data.objective_row:
                    data.objective[col] = data.objective.get(col, 0.0) + coef
                elif rname in data.coeffs:
                    data.coeffs[rname][col] = data.coeffs[rname].get(col, 0.0) + coef
                else:
                    raise ParseError(f"{path}:{lineno}: unknown row {rname!r}")
        elif section == "RHS":
            for rname, val in zip(parts[1::2], parts[2::2]):
                if rname == data.objective_row:
                    data.objective_constant = -float(val)
                else:
                    data.rhs[rname] = float(val)
        elif section == "RANGES":
            raise ParseError(f"{path}:{lineno}: RANGES entries are not supported")
        elif section == "BOUNDS":
            btype = parts[0].upper()
            col = parts[2]
            if btype in ("UP", "LO", "FX"):
                val = float(parts[3])
                if btype == "UP":
                    data.ub[col] = val
                elif btype == "LO":
                    data.lb[col] = val
                else:
                    data.lb[col] = data.ub[col] = val
            elif btype == "MI":
                data.lb[col] = -INF
            elif btype == "PL":
                data.ub[col] = INF
            elif btype == "BV":
                data.integer.add(col)
                data.lb[col], data.ub[col] = 0.0, 1.0
            else:
                raise ParseError(f"{path}:{lineno}: unknown bound type {btype!r}")
        elif section in (None, "NAME"):
            raise ParseError(f"{path}:{lineno}: data outside any section")
    return data


def lp_to_instance(data: LpData) -> MilpInstance:
    """Rebuild a solvable instance from parsed MPS data.

    Column identities become opaque VarKeys carrying the file's column names;
    integer columns default to [0, 1] unless the file bounded them otherwise.
    """
    variables = []
    col_of = {}
    for name in data.columns:
        lb = data.lb.get(name, 0.0)
        default_ub = 1.0 if name in data.integer else INF
        ub = data.ub.get(name, default_ub)
        variables.append(Variable(VarKey("x", equip=name), lb, ub, name in data.integer))
        col_of[name] = len(variables) - 1
    constraints = []
    for rname, sense in data.rows:
        coeffs = {col_of[c]: v for c, v in data.coeffs[rname].items()}
        constraints.append(Constraint(rname, coeffs, sense, data.rhs.get(rname, 0.0)))
    objective = {col_of[c]: v for c, v in data.objective.items()}
    return MilpInstance(
        variables=variables,
        constraints=constraints,
        objective=objective,
        objective_constant=data.objective_constant,
        name=data.name,
    )
