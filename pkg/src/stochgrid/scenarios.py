"""Scenario assembly: time grid, weather/demand base cases, policy trajectories,
renewable availability coefficients, and the finite scenario set.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from decimal import Decimal
from fractions import Fraction
from pathlib import Path
from typing import Mapping, Optional, Sequence

import numpy as np

from .catalog import Catalog, PvParams, WindParams, RESOURCES
from .errors import LengthError, ParseError, ProfileLengthMismatch, ValidationError


@dataclass(frozen=True)
class TimeGrid:
    """One representative day per year, repeated for `days_per_year` days.

    `intervals_per_day * delta_t` must cover the day exactly, and the horizon
    must split into whole policy blocks.
    """

    intervals_per_day: int = 48
    delta_t: float = 0.5  # hours
    years: int = 20
    days_per_year: int = 365
    block_years: int = 5

    def __post_init__(self):
        if abs(self.intervals_per_day * self.delta_t - 24.0) > 1e-9:
            raise ValidationError(
                "time grid: intervals_per_day * delta_t must equal 24 hours"
            )
        if self.block_years < 1 or self.years % self.block_years != 0:
            raise ValidationError("time grid: years must be divisible by block_years")


@dataclass(frozen=True)
class BaseCase:
    """One atomic weather + demand bundle: arrays indexed [year, interval]."""

    name: str
    wind_speed: np.ndarray  # m/s
    irradiance: np.ndarray  # kW
    temperature: np.ndarray  # degC
    demand: Mapping[str, np.ndarray]  # resource -> per-hour rate

    def __post_init__(self):
        object.__setattr__(self, "wind_speed", np.asarray(self.wind_speed, float))
        object.__setattr__(self, "irradiance", np.asarray(self.irradiance, float))
        object.__setattr__(self, "temperature", np.asarray(self.temperature, float))
        object.__setattr__(
            self, "demand", {r: np.asarray(a, float) for r, a in self.demand.items()}
        )

    def validate(self, grid: Optional[TimeGrid] = None):
        shape = self.wind_speed.shape
        series = {"wind_speed": self.wind_speed, "irradiance": self.irradiance,
                  "temperature": self.temperature}
        for res, arr in self.demand.items():
            if res not in RESOURCES:
                raise ValidationError(f"base case {self.name!r}: unknown demand resource {res!r}")
            series[f"demand[{res}]"] = arr
        for label, arr in series.items():
            if arr.ndim != 2 or arr.shape != shape:
                raise LengthError(
                    f"base case {self.name!r}: {label} must be a (years x intervals) "
                    f"array of shape {shape}"
                )
        if np.any(self.irradiance < 0):
            raise ValidationError(f"base case {self.name!r}: irradiance must be >= 0")
        for res, arr in self.demand.items():
            if np.any(arr < 0):
                raise ValidationError(f"base case {self.name!r}: demand[{res}] must be >= 0")
        if grid is not None and shape != (grid.years, grid.intervals_per_day):
            raise ProfileLengthMismatch(
                f"base case {self.name!r}: profiles are {shape}, grid expects "
                f"({grid.years}, {grid.intervals_per_day})"
            )


def pv_availability(irradiance, temperature, params: PvParams) -> float:
    """Operating power coefficient of a PV unit, clamped to [0, 1].

    Unclamped value: efficiency * irradiance * (1 - temp_coeff*(T - T_ref)).
    The clamp keeps the coefficient a usable fraction of rated power.
    """
    raw = params.efficiency * np.asarray(irradiance, float) * (
        1.0 - params.temp_coeff * (np.asarray(temperature, float) - params.ref_temp)
    )
    return np.clip(raw, 0.0, 1.0)


def wind_availability(speed, params: WindParams):
    """Operating power coefficient of a wind turbine.

    Zero outside [cut_in, cut_out], one on [rated, cut_out], and a linear ramp
    (v - cut_in) / (rated - cut_in) between cut-in and rated speed.
    """
    v = np.asarray(speed, float)
    ramp = (v - params.cut_in) / (params.rated - params.cut_in)
    out = np.where(v < params.cut_in, 0.0,
                   np.where(v > params.cut_out, 0.0,
                            np.where(v >= params.rated, 1.0, ramp)))
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class PolicyTrajectory:
    """Per-year values that step multiplicatively at the start of each block.

    values[k] = base * (1 + change)^floor((k-1)/block_years) for k = 1..K.
    """

    base_value: float
    change_per_block: float
    values: tuple[float, ...]

    def value(self, year: int) -> float:
        return self.values[year - 1]


def _exact(x: float) -> Fraction:
    # Read a float through its shortest decimal form so human-entered rates
    # like 0.2 step exactly (280 * 0.8^3 must land on 143.36 to the bit).
    return Fraction(Decimal(repr(float(x))))


def build_trajectory(base: float, change_per_block: float, grid: TimeGrid) -> PolicyTrajectory:
    """Block-stepped policy trajectory over the grid's horizon.

    Values are computed in exact rational arithmetic and rounded to float once
    per year, so repeated percentage steps carry no cumulative drift.
    """
    if not base > 0:
        raise ValidationError("trajectory base must be > 0")
    if not 1.0 + change_per_block > 0:
        raise ValidationError("trajectory change_per_block must exceed -1")
    b = _exact(base)
    step = 1 + _exact(change_per_block)
    values = tuple(
        float(b * step ** ((k - 1) // grid.block_years)) for k in range(1, grid.years + 1)
    )
    return PolicyTrajectory(base, change_per_block, values)


def constant_trajectory(value: float, grid: TimeGrid) -> PolicyTrajectory:
    return PolicyTrajectory(value, 0.0, (float(value),) * grid.years)


@dataclass(frozen=True)
class PolicyPair:
    """A CET price trajectory together with an emission limit trajectory."""

    name: str
    cet_price: PolicyTrajectory
    emission_limit: PolicyTrajectory


@dataclass(frozen=True)
class Scenario:
    """One uncertainty realization: a base case bundle plus one policy pair.

    `pv_avail`/`wind_avail` map renewable equipment ids to their derived
    availability arrays [year, interval].
    """

    id: str
    base: BaseCase
    cet_price: PolicyTrajectory
    emission_limit: PolicyTrajectory
    probability: float
    pv_avail: Mapping[str, np.ndarray] = field(default_factory=dict)
    wind_avail: Mapping[str, np.ndarray] = field(default_factory=dict)

    def availability(self, equip_id: str) -> np.ndarray:
        if equip_id in self.pv_avail:
            return self.pv_avail[equip_id]
        return self.wind_avail[equip_id]


@dataclass(frozen=True)
class ScenarioSet:
    scenarios: tuple[Scenario, ...]
    grid: TimeGrid

    def __post_init__(self):
        object.__setattr__(self, "scenarios", tuple(self.scenarios))
        total = sum(s.probability for s in self.scenarios)
        if abs(total - 1.0) > 1e-12:
            raise ValidationError(f"scenario probabilities sum to {total!r}, expected 1")

    def __len__(self):
        return len(self.scenarios)

    def by_id(self, scenario_id: str) -> Scenario:
        for s in self.scenarios:
            if s.id == scenario_id:
                return s
        raise KeyError(scenario_id)


def compute_availabilities(base: BaseCase, catalog: Catalog):
    """Per-equipment availability arrays for every renewable in the catalog."""
    pv, wind = {}, {}
    for spec in catalog.renewables():
        if spec.kind == "RenewablePV":
            pv[spec.id] = pv_availability(base.irradiance, base.temperature, spec.pv_params)
        else:
            wind[spec.id] = wind_availability(base.wind_speed, spec.wind_params)
    return pv, wind


def assemble_scenarios(
    bases: Sequence[BaseCase],
    policies: Sequence[PolicyPair],
    grid: TimeGrid,
    catalog: Catalog,
) -> ScenarioSet:
    """Cartesian product of base cases and policy pairs, equally weighted.

    Scenario ids are w1, w2, ... ordered policy-major (all bases under the
    first policy first).
    """
    if not bases or not policies:
        raise ValidationError("need at least one base case and one policy pair")
    for base in bases:
        base.validate(grid)
        if any(len(p.cet_price.values) != grid.years or
               len(p.emission_limit.values) != grid.years for p in policies):
            raise ProfileLengthMismatch("policy trajectories must cover every year")
    n = len(bases) * len(policies)
    scenarios = []
    for pol in policies:
        for base in bases:
            pv, wind = compute_availabilities(base, catalog)
            scenarios.append(
                Scenario(
                    id=f"w{len(scenarios) + 1}",
                    base=base,
                    cet_price=pol.cet_price,
                    emission_limit=pol.emission_limit,
                    probability=1.0 / n,
                    pv_avail=pv,
                    wind_avail=wind,
                )
            )
    return ScenarioSet(tuple(scenarios), grid)


PROFILE_COLUMNS = (
    "year", "interval", "wind_speed", "irradiance", "temperature",
    "demand_electricity", "demand_heat",
)


def load_profiles(path, name: Optional[str] = None) -> BaseCase:
    """Read a profile CSV (one row per (year, interval), 1-based indices).

    The file must contain every (year, interval) pair exactly once, with all
    five data series present.
    """
    path = Path(path)
    rows = {}
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(f"{path}: empty profile file") from None
        if tuple(h.strip() for h in header) != PROFILE_COLUMNS:
            raise ParseError(
                f"{path}: header must be exactly {','.join(PROFILE_COLUMNS)}"
            )
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(PROFILE_COLUMNS):
                raise ParseError(f"{path}:{lineno}: expected {len(PROFILE_COLUMNS)} fields")
            try:
                year, interval = int(row[0]), int(row[1])
                values = [float(x) for x in row[2:]]
            except ValueError as exc:
                raise ParseError(f"{path}:{lineno}: {exc}") from exc
            if (year, interval) in rows:
                raise ParseError(f"{path}:{lineno}: duplicate (year, interval) ({year}, {interval})")
            rows[(year, interval)] = values
    if not rows:
        raise LengthError(f"{path}: no data rows")
    years = max(y for y, _ in rows)
    intervals = max(t for _, t in rows)
    if len(rows) != years * intervals:
        raise LengthError(
            f"{path}: {len(rows)} rows do not fill a {years}-year x "
            f"{intervals}-interval grid"
        )
    data = np.empty((5, years, intervals))
    for (year, interval), values in rows.items():
        if year < 1 or interval < 1:
            raise LengthError(f"{path}: year/interval indices must be 1-based")
        data[:, year - 1, interval - 1] = values
    base = BaseCase(
        name=name or path.stem,
        wind_speed=data[0],
        irradiance=data[1],
        temperature=data[2],
        demand={"Electricity": data[3], "Heat": data[4]},
    )
    base.validate()
    return base


def mean_base_case(
    scenarios: Sequence[Scenario], name: str = "mean"
) -> BaseCase:
    """Probability-weighted mean of the scenarios' weather and demand series."""
    weights = np.array([s.probability for s in scenarios])
    weights = weights / weights.sum()

    def avg(pick):
        return sum(w * pick(s) for w, s in zip(weights, scenarios))

    resources = sorted({r for s in scenarios for r in s.base.demand})
    return BaseCase(
        name=name,
        wind_speed=avg(lambda s: s.base.wind_speed),
        irradiance=avg(lambda s: s.base.irradiance),
        temperature=avg(lambda s: s.base.temperature),
        demand={r: avg(lambda s: s.base.demand.get(r, 0.0) * np.ones_like(s.base.wind_speed))
                for r in resources},
    )


def mean_trajectory(
    trajectories: Sequence[PolicyTrajectory], probabilities: Sequence[float]
) -> PolicyTrajectory:
    weights = np.array(probabilities, float)
    weights = weights / weights.sum()
    stacked = np.array([t.values for t in trajectories])
    values = tuple(float(v) for v in weights @ stacked)
    return PolicyTrajectory(values[0], 0.0, values)
