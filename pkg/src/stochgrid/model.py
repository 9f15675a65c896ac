"""Deterministic-equivalent MILP compiler.

Turns a catalog + scenario set + study configuration into a solver-agnostic
sparse MILP: install/sizing rows, unit commitment, storage operation, resource
balances, peak penalty, emission caps, and the discounted cost objective with
optional cap-and-trade and surplus-SNG income.

First-stage columns (install decision, rated power, storage capacity) appear
once; every operational column is replicated per scenario, so nonanticipativity
holds by construction.
"""

from __future__ import annotations

import copy
import math
from dataclasses import dataclass, field, replace
from typing import Mapping, Optional, Sequence

import numpy as np

from .catalog import Catalog, EquipmentSpec
from .errors import BoundError, MissingDesignValue, ValidationError
from .scenarios import (
    BaseCase,
    Scenario,
    ScenarioSet,
    compute_availabilities,
    mean_base_case,
    mean_trajectory,
)

INF = math.inf

# Canonical variable-symbol order; column order is (symbol, id, year,
# interval, scenario), which the MPS writer relies on for byte-stable output.
SYMBOLS = ("a", "rp", "b", "p", "pch", "pdch", "soc", "kc", "ks", "u", "yx", "sp", "xi")
_SYMBOL_RANK = {s: i for i, s in enumerate(SYMBOLS)}

FIRST_STAGE_SYMBOLS = ("a", "rp", "b")

# Minimum/maximum stored energy as fractions of installed capacity.
SOC_MIN_FRAC = 0.2
SOC_MAX_FRAC = 0.8

# Surplus synthetic gas sells at this fraction of the gas purchase price.
SNG_PRICE_FACTOR = 0.9


@dataclass(frozen=True)
class VarKey:
    """Identity of one column: symbol plus whichever indices the symbol carries."""

    symbol: str
    equip: Optional[str] = None
    resource: Optional[str] = None
    k: Optional[int] = None
    t: Optional[int] = None
    w: Optional[int] = None

    def sort_key(self):
        return (
            _SYMBOL_RANK.get(self.symbol, len(SYMBOLS)),
            self.equip or "",
            self.resource or "",
            self.k or 0,
            self.t or 0,
            self.w or 0,
        )

    def __str__(self):
        idx = [x for x in (self.equip, self.resource, self.k, self.t, self.w) if x is not None]
        return f"{self.symbol}[{','.join(str(x) for x in idx)}]" if idx else self.symbol


@dataclass(frozen=True)
class ForcedInstall:
    equipment: str
    min_rated_power: float = 0.0
    forced_on: bool = False  # pin the commitment binary to 1 in every interval


def _default_purchasable():
    # Heat, hydrogen and CO2 may not enter the hub from outside; fuels, water
    # and (capped) electricity may.
    return {"Heat": False, "H2": False, "CO2": False}


def _default_surplus_cap():
    # Electricity may not be dumped in the base model; this is the bound the
    # relaxed VSS variant lifts.
    return {"Electricity": 0.0}


@dataclass(frozen=True)
class StudyConfig:
    """Case-study switches: objective terms, purchase caps, rates, relaxations."""

    include_cap_trade_income: bool = False
    include_sng_income: bool = False
    escalate_cap_trade: bool = False  # apply inflation to the cap-and-trade term
    max_equipment: int = 10
    elec_purchase_cap: Optional[float] = 2500.0  # kWh per interval; None = uncapped
    purchasable: Mapping[str, bool] = field(default_factory=_default_purchasable)
    surplus_cap: Mapping[str, Optional[float]] = field(default_factory=_default_surplus_cap)
    discount_rate: float = 0.12
    inflation: float = 0.0
    peak_coeff: float = 0.01
    spin_fraction: float = 0.03
    emission_base: float = 280.0  # gCO2/kWh, trajectory base when none is given
    forced_installs: tuple[ForcedInstall, ...] = ()
    relax_elec_purchase_cap: bool = False
    relax_elec_surplus: bool = False

    def __post_init__(self):
        object.__setattr__(self, "forced_installs", tuple(self.forced_installs))

    def validate(self):
        if self.max_equipment < 1:
            raise ValidationError("max_equipment must be >= 1")
        if self.discount_rate <= -1 or self.inflation <= -1:
            raise ValidationError("discount_rate and inflation must exceed -1")
        if self.elec_purchase_cap is not None and self.elec_purchase_cap < 0:
            raise ValidationError("elec_purchase_cap must be >= 0")
        for res, cap in self.surplus_cap.items():
            if cap is not None and cap < 0:
                raise ValidationError(f"surplus_cap[{res}] must be >= 0")
        if self.peak_coeff < 0 or not 0 <= self.spin_fraction:
            raise ValidationError("peak_coeff and spin_fraction must be >= 0")

    def is_purchasable(self, resource: str) -> bool:
        return self.purchasable.get(resource, True)

    def relaxed(self) -> "StudyConfig":
        """Copy with the electricity input cap and surplus bound lifted."""
        return replace(self, relax_elec_purchase_cap=True, relax_elec_surplus=True)


@dataclass
class Variable:
    key: VarKey
    lb: float
    ub: float
    integer: bool = False


@dataclass
class Constraint:
    name: str
    coeffs: dict  # column index -> coefficient
    sense: str  # "<=", ">=", "="
    rhs: float


SENSES = ("<=", ">=", "=")


@dataclass
class MilpInstance:
    """Sparse MILP with a bidirectional VarKey <-> column map."""

    variables: list
    constraints: list
    objective: dict  # column index -> coefficient
    objective_constant: float = 0.0
    name: str = "stochgrid"

    def __post_init__(self):
        self._index = {v.key: j for j, v in enumerate(self.variables)}

    def column(self, key: VarKey) -> int:
        return self._index[key]

    def key(self, col: int) -> VarKey:
        return self.variables[col].key

    def has(self, key: VarKey) -> bool:
        return key in self._index

    def columns_for_symbol(self, symbol: str):
        return [(j, v.key) for j, v in enumerate(self.variables) if v.key.symbol == symbol]

    @property
    def num_variables(self) -> int:
        return len(self.variables)

    @property
    def num_binaries(self) -> int:
        return sum(1 for v in self.variables if v.integer)

    @property
    def num_constraints(self) -> int:
        return len(self.constraints)

    def validate_bounds(self):
        for v in self.variables:
            if v.lb > v.ub:
                raise BoundError(f"variable {v.key}: lb {v.lb} > ub {v.ub}")
            if v.integer and (v.lb < -1e-9 or v.ub > 1 + 1e-9):
                raise BoundError(f"variable {v.key}: integer columns must be binary")

    def copy(self) -> "MilpInstance":
        return MilpInstance(
            variables=[Variable(v.key, v.lb, v.ub, v.integer) for v in self.variables],
            constraints=[
                Constraint(c.name, dict(c.coeffs), c.sense, c.rhs) for c in self.constraints
            ],
            objective=dict(self.objective),
            objective_constant=self.objective_constant,
            name=self.name,
        )


class _Builder:
    """Accumulates columns and rows in canonical order."""

    def __init__(self, name: str):
        self.variables = []
        self.constraints = []
        self.objective = {}
        self.constant = 0.0
        self.name = name
        self._index = {}

    def add_var(self, key: VarKey, lb=0.0, ub=INF, integer=False) -> int:
        if key in self._index:
            raise ValidationError(f"duplicate variable {key}")
        self.variables.append(Variable(key, lb, ub, integer))
        self._index[key] = len(self.variables) - 1
        return self._index[key]

    def col(self, key: VarKey) -> int:
        return self._index[key]

    def add_row(self, name: str, coeffs: Mapping[VarKey, float], sense: str, rhs: float):
        row = {}
        for key, coef in coeffs.items():
            if coef != 0.0:
                col = self._index[key]
                row[col] = row.get(col, 0.0) + coef
        self.constraints.append(Constraint(name, row, sense, rhs))

    def add_objective(self, key: VarKey, coef: float):
        if coef == 0.0:
            return
        col = self._index[key]
        self.objective[col] = self.objective.get(col, 0.0) + coef

    def finish(self) -> MilpInstance:
        return MilpInstance(
            variables=self.variables,
            constraints=self.constraints,
            objective=self.objective,
            objective_constant=self.constant,
            name=self.name,
        )


def active_resources(catalog: Catalog, scenario_set: ScenarioSet) -> list:
    """Resources the instance balances: everything any equipment touches or any
    scenario demands, plus Electricity (load, reserve, purchases) and CO2
    (emission accounting). Sorted for canonical ordering."""
    resources = {"Electricity", "CO2"}
    for spec in catalog.equipment:
        resources.update(spec.gen)
        resources.update(spec.cons)
    for scen in scenario_set.scenarios:
        for res, arr in scen.base.demand.items():
            if np.any(arr != 0):
                resources.add(res)
    return sorted(resources)


def _demand(scen: Scenario, resource: str, k: int, t: int) -> float:
    arr = scen.base.demand.get(resource)
    return float(arr[k - 1, t - 1]) if arr is not None else 0.0


def _register_variables(b: _Builder, catalog, scenario_set, config, resources):
    grid = scenario_set.grid
    K, T, W = grid.years, grid.intervals_per_day, len(scenario_set)
    ids = sorted(catalog.ids())
    gens = sorted(s.id for s in catalog.generators())
    stors = sorted(s.id for s in catalog.storages())
    forced = {f.equipment: f for f in config.forced_installs}

    for i in ids:
        lb = 1.0 if i in forced else 0.0
        b.add_var(VarKey("a", equip=i), lb, 1.0, integer=True)
    for i in ids:
        b.add_var(VarKey("rp", equip=i))
    for i in stors:
        b.add_var(VarKey("b", equip=i))
    for i in gens:
        for k in range(1, K + 1):
            for t in range(1, T + 1):
                for w in range(1, W + 1):
                    b.add_var(VarKey("p", equip=i, k=k, t=t, w=w))
    for sym in ("pch", "pdch", "soc"):
        for i in stors:
            for k in range(1, K + 1):
                for t in range(1, T + 1):
                    for w in range(1, W + 1):
                        b.add_var(VarKey(sym, equip=i, k=k, t=t, w=w))
    for i in gens:
        on = 1.0 if (i in forced and forced[i].forced_on) else 0.0
        for k in range(1, K + 1):
            for t in range(1, T + 1):
                for w in range(1, W + 1):
                    b.add_var(VarKey("kc", equip=i, k=k, t=t, w=w), on, 1.0, integer=True)
    for i in stors:
        for k in range(1, K + 1):
            for t in range(1, T + 1):
                for w in range(1, W + 1):
                    b.add_var(VarKey("ks", equip=i, k=k, t=t, w=w), 0.0, 1.0, integer=True)

    for n in resources:
        cap = _purchase_cap(n, config, grid)
        for k in range(1, K + 1):
            for t in range(1, T + 1):
                for w in range(1, W + 1):
                    b.add_var(VarKey("u", resource=n, k=k, t=t, w=w), 0.0, cap)
    for n in resources:
        scap = _surplus_cap(n, config)
        for k in range(1, K + 1):
            for t in range(1, T + 1):
                for w in range(1, W + 1):
                    b.add_var(VarKey("yx", resource=n, k=k, t=t, w=w), 0.0, scap)
    for n in resources:
        for k in range(1, K + 1):
            for w, scen in enumerate(scenario_set.scenarios, start=1):
                if n == "Electricity":
                    peak = _demand_peak(scen, n, k)
                    ub = config.spin_fraction * peak
                else:
                    ub = 0.0
                b.add_var(VarKey("sp", resource=n, k=k, w=w), 0.0, ub)
    for w in range(1, W + 1):
        b.add_var(VarKey("xi", w=w))


def _demand_peak(scen: Scenario, resource: str, k: int) -> float:
    arr = scen.base.demand.get(resource)
    return float(arr[k - 1].max()) if arr is not None else 0.0


def _purchase_cap(resource: str, config: StudyConfig, grid) -> float:
    if not config.is_purchasable(resource):
        return 0.0
    if resource == "Electricity":
        if config.relax_elec_purchase_cap or config.elec_purchase_cap is None:
            return INF
        # the configured cap is energy per interval; u is a per-hour rate
        return config.elec_purchase_cap / grid.delta_t
    return INF


def _surplus_cap(resource: str, config: StudyConfig) -> float:
    if resource == "Electricity" and config.relax_elec_surplus:
        return INF
    cap = config.surplus_cap.get(resource)
    return INF if cap is None else cap


def add_installation_constraints(b: _Builder, catalog: Catalog, config: StudyConfig):
    """Cardinality cap, rated-power and capacity windows tied to the install
    binary, and any forced installs."""
    ids = sorted(catalog.ids())
    b.add_row(
        "card",
        {VarKey("a", equip=i): 1.0 for i in ids},
        "<=",
        float(config.max_equipment),
    )
    for i in ids:
        spec = catalog.lookup(i)
        a, rp = VarKey("a", equip=i), VarKey("rp", equip=i)
        b.add_row(f"rp_lo[{i}]", {a: spec.rp_min, rp: -1.0}, "<=", 0.0)
        b.add_row(f"rp_hi[{i}]", {rp: 1.0, a: -spec.rp_max}, "<=", 0.0)
    for spec in sorted(catalog.storages(), key=lambda s: s.id):
        a, cap = VarKey("a", equip=spec.id), VarKey("b", equip=spec.id)
        b.add_row(f"b_lo[{spec.id}]", {a: spec.cap_min, cap: -1.0}, "<=", 0.0)
        b.add_row(f"b_hi[{spec.id}]", {cap: 1.0, a: -spec.cap_max}, "<=", 0.0)
    for forced in config.forced_installs:
        spec = catalog.lookup(forced.equipment)  # raises UnknownEquipment
        if forced.min_rated_power > spec.rp_max:
            raise ValidationError(
                f"forced install {forced.equipment!r}: minimum {forced.min_rated_power} "
                f"exceeds rp_max {spec.rp_max}"
            )
        b.add_row(
            f"force_rp[{forced.equipment}]",
            {VarKey("rp", equip=forced.equipment): 1.0},
            ">=",
            float(forced.min_rated_power),
        )


def add_commitment_constraints(b: _Builder, catalog, scenario_set, config):
    """Generator operating-power window gated by the run binary."""
    grid = scenario_set.grid
    K, T, W = grid.years, grid.intervals_per_day, len(scenario_set)
    for spec in sorted(catalog.generators(), key=lambda s: s.id):
        i, pf_lo, pf_hi = spec.id, spec.p_frac_min, spec.p_frac_max
        rp = VarKey("rp", equip=i)
        for k in range(1, K + 1):
            for t in range(1, T + 1):
                for w in range(1, W + 1):
                    p = VarKey("p", equip=i, k=k, t=t, w=w)
                    kc = VarKey("kc", equip=i, k=k, t=t, w=w)
                    # pf_lo*(rp - (1-kc)*rp_max) <= p
                    b.add_row(
                        f"cmt_lo[{i},{k},{t},{w}]",
                        {rp: pf_lo, kc: pf_lo * spec.rp_max, p: -1.0},
                        "<=",
                        pf_lo * spec.rp_max,
                    )
                    b.add_row(
                        f"cmt_hi[{i},{k},{t},{w}]", {p: 1.0, rp: -pf_hi}, "<=", 0.0
                    )
                    b.add_row(
                        f"cmt_on[{i},{k},{t},{w}]",
                        {p: 1.0, kc: -pf_hi * spec.rp_max},
                        "<=",
                        0.0,
                    )


def add_storage_constraints(b: _Builder, catalog, scenario_set):
    """Charge/discharge caps, mutual exclusion, SOC window, and the daily-
    periodic SOC recursion.

    The first interval's recursion closes the day against the last interval's
    state, which is exactly the same-initial-and-final-condition requirement.
    """
    grid = scenario_set.grid
    K, T, W = grid.years, grid.intervals_per_day, len(scenario_set)
    dt = grid.delta_t
    for spec in sorted(catalog.storages(), key=lambda s: s.id):
        i, pf = spec.id, spec.p_frac_max
        rp, cap = VarKey("rp", equip=i), VarKey("b", equip=i)
        for k in range(1, K + 1):
            for w in range(1, W + 1):
                for t in range(1, T + 1):
                    pch = VarKey("pch", equip=i, k=k, t=t, w=w)
                    pdch = VarKey("pdch", equip=i, k=k, t=t, w=w)
                    soc = VarKey("soc", equip=i, k=k, t=t, w=w)
                    ks = VarKey("ks", equip=i, k=k, t=t, w=w)
                    b.add_row(f"sch_cap[{i},{k},{t},{w}]", {pch: 1.0, rp: -pf}, "<=", 0.0)
                    b.add_row(f"sdis_cap[{i},{k},{t},{w}]", {pdch: 1.0, rp: -pf}, "<=", 0.0)
                    b.add_row(
                        f"sch_on[{i},{k},{t},{w}]",
                        {pch: 1.0, ks: -pf * spec.rp_max},
                        "<=",
                        0.0,
                    )
                    b.add_row(
                        f"sdis_off[{i},{k},{t},{w}]",
                        {pdch: 1.0, ks: pf * spec.rp_max},
                        "<=",
                        pf * spec.rp_max,
                    )
                    b.add_row(
                        f"soc_lo[{i},{k},{t},{w}]",
                        {cap: SOC_MIN_FRAC, soc: -1.0},
                        "<=",
                        0.0,
                    )
                    b.add_row(
                        f"soc_hi[{i},{k},{t},{w}]",
                        {soc: 1.0, cap: -SOC_MAX_FRAC},
                        "<=",
                        0.0,
                    )
                    prev = VarKey("soc", equip=i, k=k, t=t - 1 if t > 1 else T, w=w)
                    name = (
                        f"soc_rec[{i},{k},{t},{w}]" if t > 1 else f"soc_per[{i},{k},{w}]"
                    )
                    b.add_row(
                        name,
                        {soc: 1.0, prev: -1.0, pch: -dt, pdch: dt},
                        "=",
                        0.0,
                    )


def add_balance_constraints(b: _Builder, catalog, scenario_set, config, resources):
    """Per-(resource, year, interval, scenario) material balance:
    generation + discharge + renewable output + purchases
    = consumption + charge + renewable input + reserve + surplus + demand."""
    grid = scenario_set.grid
    K, T = grid.years, grid.intervals_per_day
    gens = sorted(catalog.generators(), key=lambda s: s.id)
    stors = sorted(catalog.storages(), key=lambda s: s.id)
    renews = sorted(catalog.renewables(), key=lambda s: s.id)
    for n in resources:
        gen_net = {s.id: s.gen.get(n, 0.0) - s.cons.get(n, 0.0) for s in gens}
        for k in range(1, K + 1):
            for t in range(1, T + 1):
                for w, scen in enumerate(scenario_set.scenarios, start=1):
                    coeffs = {}
                    for spec in gens:
                        net = gen_net[spec.id]
                        if net != 0.0:
                            coeffs[VarKey("p", equip=spec.id, k=k, t=t, w=w)] = net
                    for spec in stors:
                        g = spec.gen.get(n, 0.0)
                        c = spec.cons.get(n, 0.0)
                        if g:
                            coeffs[VarKey("pdch", equip=spec.id, k=k, t=t, w=w)] = g
                        if c:
                            coeffs[VarKey("pch", equip=spec.id, k=k, t=t, w=w)] = -c
                    for spec in renews:
                        net = spec.gen.get(n, 0.0) - spec.cons.get(n, 0.0)
                        if net != 0.0:
                            avail = float(scen.availability(spec.id)[k - 1, t - 1])
                            if avail != 0.0:
                                rp = VarKey("rp", equip=spec.id)
                                coeffs[rp] = coeffs.get(rp, 0.0) + net * avail
                    coeffs[VarKey("u", resource=n, k=k, t=t, w=w)] = 1.0
                    coeffs[VarKey("yx", resource=n, k=k, t=t, w=w)] = -1.0
                    coeffs[VarKey("sp", resource=n, k=k, w=w)] = -1.0
                    b.add_row(
                        f"bal[{n},{k},{t},{w}]", coeffs, "=", _demand(scen, n, k, t)
                    )


def add_peak_and_emission_constraints(b: _Builder, catalog, scenario_set, config):
    """One peak-penalty variable per scenario dominating every generator's
    electricity output, and a daily net-CO2 cap per (year, scenario)."""
    grid = scenario_set.grid
    K, T = grid.years, grid.intervals_per_day
    delta = config.peak_coeff
    for spec in sorted(catalog.generators(), key=lambda s: s.id):
        g_elec = spec.gen.get("Electricity", 0.0)
        for k in range(1, K + 1):
            for t in range(1, T + 1):
                for w in range(1, len(scenario_set) + 1):
                    b.add_row(
                        f"peak[{spec.id},{k},{t},{w}]",
                        {
                            VarKey("p", equip=spec.id, k=k, t=t, w=w): delta * g_elec,
                            VarKey("xi", w=w): -1.0,
                        },
                        "<=",
                        0.0,
                    )
    for k in range(1, K + 1):
        for w, scen in enumerate(scenario_set.scenarios, start=1):
            load = sum(_demand(scen, "Electricity", k, t) for t in range(1, T + 1))
            allowance = scen.emission_limit.value(k) * load
            b.add_row(
                f"emis[{k},{w}]",
                {VarKey("yx", resource="CO2", k=k, t=t, w=w): 1.0 for t in range(1, T + 1)},
                "<=",
                allowance,
            )


def build_objective(b: _Builder, catalog, scenario_set, config, resources):
    """Minimize build cost plus discounted, inflation-escalated yearly cash
    flow (maintenance, resource purchases, surplus cost, peak penalty), minus
    the enabled income streams."""
    grid = scenario_set.grid
    K, T = grid.years, grid.intervals_per_day
    D, dt = grid.days_per_year, grid.delta_t
    disc = [(1.0 + config.discount_rate) ** (-(k - 1)) for k in range(1, K + 1)]
    esc = [(1.0 + config.inflation) ** (k - 1) for k in range(1, K + 1)]

    for spec in catalog.equipment:
        maint = sum(disc[k - 1] * esc[k - 1] for k in range(1, K + 1))
        b.add_objective(VarKey("a", equip=spec.id), spec.gamma0 + maint * spec.gamma_k)
        b.add_objective(VarKey("rp", equip=spec.id), spec.alpha0 + maint * spec.alpha_k)
        if spec.kind == "Storage":
            b.add_objective(VarKey("b", equip=spec.id), spec.beta0 + maint * spec.beta_k)

    gas_price = catalog.price("Gas").purchase
    for n in resources:
        price = catalog.price(n)
        for k in range(1, K + 1):
            base = disc[k - 1] * D * dt
            for w, scen in enumerate(scenario_set.scenarios, start=1):
                pw = scen.probability
                u_coef = base * esc[k - 1] * pw * price.purchase
                yx_coef = base * esc[k - 1] * pw * price.surplus
                if n == "CO2" and config.include_cap_trade_income:
                    trade_esc = esc[k - 1] if config.escalate_cap_trade else 1.0
                    eprice = scen.cet_price.value(k)
                    yx_coef += base * trade_esc * pw * eprice
                    load = sum(_demand(scen, "Electricity", k, t) for t in range(1, T + 1))
                    b.constant -= base * trade_esc * pw * eprice * (
                        scen.emission_limit.value(k) * load
                    )
                if n == "Gas" and config.include_sng_income:
                    yx_coef -= base * esc[k - 1] * pw * SNG_PRICE_FACTOR * gas_price
                for t in range(1, T + 1):
                    if u_coef:
                        b.add_objective(VarKey("u", resource=n, k=k, t=t, w=w), u_coef)
                    if yx_coef:
                        b.add_objective(VarKey("yx", resource=n, k=k, t=t, w=w), yx_coef)

    for w, scen in enumerate(scenario_set.scenarios, start=1):
        b.add_objective(VarKey("xi", w=w), D * K * T * scen.probability)


def build_instance(catalog: Catalog, scenario_set: ScenarioSet, config: StudyConfig) -> MilpInstance:
    """Compile the full deterministic equivalent in canonical order."""
    if not catalog.equipment:
        raise ValidationError("catalog has no equipment")
    catalog.validate()
    config.validate()
    for forced in config.forced_installs:
        catalog.lookup(forced.equipment)
    resources = active_resources(catalog, scenario_set)
    b = _Builder(name="stochgrid")
    _register_variables(b, catalog, scenario_set, config, resources)
    add_installation_constraints(b, catalog, config)
    add_commitment_constraints(b, catalog, scenario_set, config)
    add_storage_constraints(b, catalog, scenario_set)
    add_balance_constraints(b, catalog, scenario_set, config, resources)
    add_peak_and_emission_constraints(b, catalog, scenario_set, config)
    build_objective(b, catalog, scenario_set, config, resources)
    return b.finish()


def single_scenario_set(scenario_set: ScenarioSet, index: int) -> ScenarioSet:
    """A one-scenario set (probability 1) for recourse and wait-and-see solves."""
    scen = scenario_set.scenarios[index]
    return ScenarioSet((replace(scen, probability=1.0),), scenario_set.grid)


def mean_value_scenario_set(scenario_set: ScenarioSet, catalog: Catalog) -> ScenarioSet:
    """Single-scenario set carrying probability-weighted mean inputs.

    Weather is averaged before the availability curves are applied, demand and
    policy trajectories are averaged directly.
    """
    scens = scenario_set.scenarios
    probs = [s.probability for s in scens]
    base = mean_base_case(scens)
    pv, wind = compute_availabilities(base, catalog)
    mean_scen = Scenario(
        id="mean",
        base=base,
        cet_price=mean_trajectory([s.cet_price for s in scens], probs),
        emission_limit=mean_trajectory([s.emission_limit for s in scens], probs),
        probability=1.0,
        pv_avail=pv,
        wind_avail=wind,
    )
    return ScenarioSet((mean_scen,), scenario_set.grid)


def build_mean_value_instance(catalog, scenario_set, config) -> MilpInstance:
    """The mean-value (expected value) problem of the stochastic instance."""
    return build_instance(catalog, mean_value_scenario_set(scenario_set, catalog), config)


def first_stage_design(solution_values: Mapping[VarKey, float]) -> dict:
    """Extract {a, rp, b} maps from a solution's values."""
    design = {"a": {}, "rp": {}, "b": {}}
    for key, val in solution_values.items():
        if key.symbol == "a":
            design["a"][key.equip] = float(round(val))
        elif key.symbol == "rp":
            design["rp"][key.equip] = float(val)
        elif key.symbol == "b":
            design["b"][key.equip] = float(val)
    return design


def fix_first_stage(instance: MilpInstance, design: Mapping[str, Mapping[str, float]]) -> MilpInstance:
    """Copy of the instance with a/rp/b pinned to the given design.

    Raises MissingDesignValue when the design does not cover a first-stage
    column, and BoundError when the pinned values contradict variable bounds
    or any constraint made constant by the fixing (e.g. rp below rp_min*a).
    """
    fixed = instance.copy()
    tol = 1e-6
    pinned = {}
    for j, var in enumerate(fixed.variables):
        sym = var.key.symbol
        if sym not in FIRST_STAGE_SYMBOLS:
            continue
        per_symbol = design.get(sym, {})
        if var.key.equip not in per_symbol:
            raise MissingDesignValue(f"design does not cover {var.key}")
        val = float(per_symbol[var.key.equip])
        if sym == "a":
            val = float(round(val))
        if val < var.lb - tol or val > var.ub + tol:
            raise BoundError(f"design value {val} for {var.key} outside bounds "
                             f"[{var.lb}, {var.ub}]")
        val = min(max(val, var.lb), var.ub)
        var.lb = var.ub = val
        pinned[j] = val
    for row in fixed.constraints:
        if not set(row.coeffs) <= set(pinned):
            continue
        lhs = sum(coef * pinned[j] for j, coef in row.coeffs.items())
        bad = (
            (row.sense == "<=" and lhs > row.rhs + tol)
            or (row.sense == ">=" and lhs < row.rhs - tol)
            or (row.sense == "=" and abs(lhs - row.rhs) > tol)
        )
        if bad:
            raise BoundError(
                f"design violates {row.name}: lhs {lhs} vs rhs {row.rhs} ({row.sense})"
            )
    return fixed
