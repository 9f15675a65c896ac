"""Turning solutions into study quantities: chosen-equipment tables, dispatch
balances, renewable share, annual emissions, cost breakdowns, and the value of
the stochastic solution / perfect information procedures.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

from .catalog import Catalog
from .errors import IndexOutOfRange
from .model import (
    MilpInstance,
    StudyConfig,
    VarKey,
    build_instance,
    build_mean_value_instance,
    first_stage_design,
    fix_first_stage,
    single_scenario_set,
    SNG_PRICE_FACTOR,
)
from .scenarios import Scenario, ScenarioSet

GRAMS_PER_TONNE = 1e6


@dataclass
class DesignRow:
    equipment: str
    rated_power: float
    capacity: Optional[float] = None  # storage only


@dataclass
class DesignReport:
    rows: list = field(default_factory=list)

    def ids(self):
        return [r.equipment for r in self.rows]


def extract_design(solution, catalog: Catalog) -> DesignReport:
    """Equipment installed in the solution (a = 1) with rated power/capacity."""
    report = DesignReport()
    for spec in catalog.equipment:
        a = solution.values.get(VarKey("a", equip=spec.id), 0.0)
        if a < 0.5:
            continue
        rp = solution.values.get(VarKey("rp", equip=spec.id), 0.0)
        cap = None
        if spec.kind == "Storage":
            cap = solution.values.get(VarKey("b", equip=spec.id), 0.0)
        report.rows.append(DesignRow(spec.id, rp, cap))
    return report


def _scenario_index(scenario_set: ScenarioSet, scenario) -> int:
    if isinstance(scenario, str):
        for i, s in enumerate(scenario_set.scenarios):
            if s.id == scenario:
                return i
        raise IndexOutOfRange(f"no scenario with id {scenario!r}")
    i = int(scenario)
    if not 0 <= i < len(scenario_set):
        raise IndexOutOfRange(f"scenario index {i} out of range")
    return i


@dataclass
class DispatchRow:
    interval: int
    demand: float  # kWh over the interval
    purchase: float
    supply: Mapping[str, float]  # equipment -> kWh delivered
    charge: Mapping[str, float]  # equipment -> kWh absorbed
    surplus: float
    reserve: float


def dispatch_table(
    solution,
    catalog: Catalog,
    scenario_set: ScenarioSet,
    config: StudyConfig,
    scenario,
    year: int,
) -> list:
    """Per-interval electricity balance for one (scenario, year), in kWh.

    Supplies (generation, discharge, renewable output, purchases) equal sinks
    (demand, charging, reserve, surplus) in every row.
    """
    grid = scenario_set.grid
    if not 1 <= year <= grid.years:
        raise IndexOutOfRange(f"year {year} out of range 1..{grid.years}")
    w = _scenario_index(scenario_set, scenario) + 1
    scen = scenario_set.scenarios[w - 1]
    dt = grid.delta_t
    rows = []
    for t in range(1, grid.intervals_per_day + 1):
        supply, charge = {}, {}
        for spec in catalog.generators():
            g = spec.gen.get("Electricity", 0.0)
            c = spec.cons.get("Electricity", 0.0)
            p = solution.values.get(VarKey("p", equip=spec.id, k=year, t=t, w=w), 0.0)
            if g:
                supply[spec.id] = g * p * dt
            if c and p:
                charge[spec.id] = charge.get(spec.id, 0.0) + c * p * dt
        for spec in catalog.storages():
            g = spec.gen.get("Electricity", 0.0)
            c = spec.cons.get("Electricity", 0.0)
            pdch = solution.values.get(VarKey("pdch", equip=spec.id, k=year, t=t, w=w), 0.0)
            pch = solution.values.get(VarKey("pch", equip=spec.id, k=year, t=t, w=w), 0.0)
            if g * pdch:
                supply[spec.id] = g * pdch * dt
            if c * pch:
                charge[spec.id] = c * pch * dt
        for spec in catalog.renewables():
            g = spec.gen.get("Electricity", 0.0)
            rp = solution.values.get(VarKey("rp", equip=spec.id), 0.0)
            if g and rp:
                avail = float(scen.availability(spec.id)[year - 1, t - 1])
                supply[spec.id] = g * avail * rp * dt
        purchase = solution.values.get(
            VarKey("u", resource="Electricity", k=year, t=t, w=w), 0.0
        ) * dt
        surplus = solution.values.get(
            VarKey("yx", resource="Electricity", k=year, t=t, w=w), 0.0
        ) * dt
        reserve = solution.values.get(
            VarKey("sp", resource="Electricity", k=year, w=w), 0.0
        ) * dt
        demand = scen.base.demand.get("Electricity")
        demand = float(demand[year - 1, t - 1]) * dt if demand is not None else 0.0
        rows.append(DispatchRow(t, demand, purchase, supply, charge, surplus, reserve))
    return rows


def renewable_share(
    solution, catalog: Catalog, scenario_set: ScenarioSet, config: StudyConfig,
    scenario, year: int,
):
    """Percent of delivered electricity (incl. purchases) coming from equipment
    flagged renewable, over the representative day. Returns (percent, warned)
    where warned marks a zero-supply day."""
    rows = dispatch_table(solution, catalog, scenario_set, config, scenario, year)
    renewable_ids = {s.id for s in catalog.equipment if s.renewable}
    total = 0.0
    green = 0.0
    for row in rows:
        total += row.purchase
        for eq, kwh in row.supply.items():
            total += kwh
            if eq in renewable_ids:
                green += kwh
    if total <= 0.0:
        return 0.0, True
    return 100.0 * green / total, False


def annual_emissions(
    solution, scenario_set: ScenarioSet, scenario, year: int
) -> float:
    """Net CO2 released over the year, in tonnes."""
    grid = scenario_set.grid
    if not 1 <= year <= grid.years:
        raise IndexOutOfRange(f"year {year} out of range 1..{grid.years}")
    w = _scenario_index(scenario_set, scenario) + 1
    total_rate = sum(
        solution.values.get(VarKey("yx", resource="CO2", k=year, t=t, w=w), 0.0)
        for t in range(1, grid.intervals_per_day + 1)
    )
    grams = grid.days_per_year * grid.delta_t * total_rate
    return grams / GRAMS_PER_TONNE


@dataclass
class CostBreakdown:
    initial: float
    om: float
    purchases: float
    peak: float
    cap_trade_income: float
    sng_income: float

    @property
    def net_present_cost(self) -> float:
        return (
            self.initial + self.om + self.purchases + self.peak
            - self.cap_trade_income - self.sng_income
        )


def cost_breakdown(
    solution, catalog: Catalog, scenario_set: ScenarioSet, config: StudyConfig
) -> CostBreakdown:
    """Recompute every objective component from the solution values.

    The components sum to the solver objective (the accounting identity the
    acceptance suite pins down).
    """
    grid = scenario_set.grid
    K, T = grid.years, grid.intervals_per_day
    D, dt = grid.days_per_year, grid.delta_t
    disc = [(1.0 + config.discount_rate) ** (-(k - 1)) for k in range(1, K + 1)]
    esc = [(1.0 + config.inflation) ** (k - 1) for k in range(1, K + 1)]
    val = solution.values.get

    initial = 0.0
    om = 0.0
    for spec in catalog.equipment:
        a = val(VarKey("a", equip=spec.id), 0.0)
        rp = val(VarKey("rp", equip=spec.id), 0.0)
        b = val(VarKey("b", equip=spec.id), 0.0) if spec.kind == "Storage" else 0.0
        initial += spec.alpha0 * rp + spec.gamma0 * a + spec.beta0 * b
        yearly = spec.alpha_k * rp + spec.gamma_k * a + spec.beta_k * b
        om += sum(disc[k - 1] * esc[k - 1] * yearly for k in range(1, K + 1))

    resources = sorted(
        {key.resource for key in solution.values if key.symbol == "u" and key.resource}
    )
    purchases = 0.0
    cap_trade = 0.0
    sng = 0.0
    gas_price = catalog.price("Gas").purchase
    for w, scen in enumerate(scenario_set.scenarios, start=1):
        pw = scen.probability
        for k in range(1, K + 1):
            base = disc[k - 1] * D * dt
            for n in resources:
                price = catalog.price(n)
                u_sum = sum(val(VarKey("u", resource=n, k=k, t=t, w=w), 0.0)
                            for t in range(1, T + 1))
                yx_sum = sum(val(VarKey("yx", resource=n, k=k, t=t, w=w), 0.0)
                             for t in range(1, T + 1))
                purchases += base * esc[k - 1] * pw * (
                    price.purchase * u_sum + price.surplus * yx_sum
                )
                if n == "CO2" and config.include_cap_trade_income:
                    trade_esc = esc[k - 1] if config.escalate_cap_trade else 1.0
                    load = sum(
                        float(scen.base.demand["Electricity"][k - 1, t - 1])
                        for t in range(1, T + 1)
                    ) if "Electricity" in scen.base.demand else 0.0
                    allowance = scen.emission_limit.value(k) * load
                    cap_trade += base * trade_esc * pw * scen.cet_price.value(k) * (
                        allowance - yx_sum
                    )
                if n == "Gas" and config.include_sng_income:
                    sng += base * esc[k - 1] * pw * SNG_PRICE_FACTOR * gas_price * yx_sum
    peak = sum(
        D * K * T * scen.probability * val(VarKey("xi", w=w), 0.0)
        for w, scen in enumerate(scenario_set.scenarios, start=1)
    )
    return CostBreakdown(initial, om, purchases, peak, cap_trade, sng)


@dataclass
class VssResult:
    ss: float
    evs: Optional[float]  # None marks the +infinity outcome
    recourse_statuses: Mapping[str, str] = field(default_factory=dict)
    relaxed: bool = False

    @property
    def infinite(self) -> bool:
        return self.evs is None

    @property
    def vss(self) -> Optional[float]:
        return None if self.evs is None else self.evs - self.ss

    def format_vss(self) -> str:
        return "+inf" if self.infinite else repr(self.vss)


def compute_vss(
    catalog: Catalog,
    scenario_set: ScenarioSet,
    config: StudyConfig,
    backend,
    relaxed: bool = False,
) -> VssResult:
    """Value of the stochastic solution.

    Solves the stochastic problem (SS), sizes a design on the mean-value
    problem, prices that fixed design per scenario; any infeasible recourse
    makes the expected value solution +infinity.  With `relaxed`, the whole
    procedure reruns with the electricity purchase cap and surplus bound
    lifted.
    """
    cfg = config.relaxed() if relaxed else config
    stochastic = backend.solve(build_instance(catalog, scenario_set, cfg))
    if not stochastic.is_optimal:
        raise RuntimeError(f"stochastic problem not optimal: {stochastic.status}")
    ss = stochastic.objective

    mean_solution = backend.solve(build_mean_value_instance(catalog, scenario_set, cfg))
    statuses = {}
    if not mean_solution.is_optimal:
        statuses["mean"] = str(mean_solution.status)
        return VssResult(ss, None, statuses, relaxed)
    design = first_stage_design(mean_solution.values)

    evs = 0.0
    infinite = False
    for i, scen in enumerate(scenario_set.scenarios):
        sub = build_instance(catalog, single_scenario_set(scenario_set, i), cfg)
        recourse = backend.solve(fix_first_stage(sub, design))
        statuses[scen.id] = str(recourse.status)
        if not recourse.is_optimal:
            infinite = True
            continue
        evs += scen.probability * recourse.objective
    return VssResult(ss, None if infinite else evs, statuses, relaxed)


def compute_ws(catalog, scenario_set, config, backend) -> float:
    """Wait-and-see value: probability-weighted per-scenario optima."""
    ws = 0.0
    for i, scen in enumerate(scenario_set.scenarios):
        sub = build_instance(catalog, single_scenario_set(scenario_set, i), config)
        sol = backend.solve(sub)
        if not sol.is_optimal:
            raise RuntimeError(f"scenario {scen.id} problem not optimal: {sol.status}")
        ws += scen.probability * sol.objective
    return ws


def compute_evpi(catalog, scenario_set, config, backend) -> float:
    """Expected value of perfect information: SS - WS (>= 0 up to tolerance)."""
    stochastic = backend.solve(build_instance(catalog, scenario_set, config))
    if not stochastic.is_optimal:
        raise RuntimeError(f"stochastic problem not optimal: {stochastic.status}")
    ws = compute_ws(catalog, scenario_set, config, backend)
    return stochastic.objective - ws
