"""Equipment catalog: data model, bundled default dataset, and JSON (de)serialization.

A catalog is the pool of candidate devices the design stage may install,
plus the purchase/surplus price of every resource the hub can exchange
with the outside world.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Optional

from .errors import ParseError, UnknownEquipment, ValidationError

# The resource set is closed: exactly these ten carriers.
RESOURCES: tuple[str, ...] = (
    "Electricity",
    "Heat",
    "Biomass",
    "Gas",
    "Oil",
    "CO2",
    "WoodFuel",
    "Coal",
    "H2",
    "Water",
)

KINDS: tuple[str, ...] = ("Generator", "Storage", "RenewableWind", "RenewablePV")

GEN = "gen"
CONS = "cons"


@dataclass(frozen=True)
class WindParams:
    """Wind power-curve speeds in m/s; cut_in < rated <= cut_out."""

    cut_in: float = 3.0
    rated: float = 12.0
    cut_out: float = 25.0


@dataclass(frozen=True)
class PvParams:
    """PV conversion parameters: panel efficiency, temperature derating per degC,
    and the reference cell temperature in degC."""

    efficiency: float = 0.18
    temp_coeff: float = 0.004
    ref_temp: float = 25.0


@dataclass(frozen=True)
class EquipmentSpec:
    """One candidate device.

    Rates in ``gen``/``cons`` are per unit operating power (kW) per hour, in the
    resource's own unit (kWh, MJ, g, kg). Cost coefficients: ``alpha0``/``beta0``/
    ``gamma0`` are build costs per kW / per kWh / fixed; ``alpha_k``/``beta_k``/
    ``gamma_k`` are the yearly maintenance counterparts.
    """

    id: str
    kind: str
    rp_min: float
    rp_max: float
    cap_min: float = 0.0
    cap_max: float = 0.0
    alpha0: float = 0.0
    beta0: float = 0.0
    gamma0: float = 0.0
    alpha_k: float = 0.0
    beta_k: float = 0.0
    gamma_k: float = 0.0
    gen: Mapping[str, float] = field(default_factory=dict)
    cons: Mapping[str, float] = field(default_factory=dict)
    p_frac_min: float = 0.0
    p_frac_max: float = 1.0
    renewable: Optional[bool] = None
    wind_params: Optional[WindParams] = None
    pv_params: Optional[PvParams] = None

    def __post_init__(self):
        if self.renewable is None:
            object.__setattr__(
                self, "renewable", self.kind in ("RenewableWind", "RenewablePV")
            )
        if self.kind == "RenewableWind" and self.wind_params is None:
            object.__setattr__(self, "wind_params", WindParams())
        if self.kind == "RenewablePV" and self.pv_params is None:
            object.__setattr__(self, "pv_params", PvParams())

    def validate(self):
        eid = self.id
        if self.kind not in KINDS:
            raise ValidationError(f"equipment {eid!r}: unknown kind {self.kind!r}")
        if not 0 <= self.rp_min <= self.rp_max:
            raise ValidationError(
                f"equipment {eid!r}: rp_min/rp_max must satisfy 0 <= min <= max"
            )
        if not 0 <= self.cap_min <= self.cap_max:
            raise ValidationError(
                f"equipment {eid!r}: cap_min/cap_max must satisfy 0 <= min <= max"
            )
        if self.kind != "Storage" and self.cap_max != 0:
            raise ValidationError(
                f"equipment {eid!r}: cap_max must be 0 for non-storage equipment"
            )
        for direction, rates in ((GEN, self.gen), (CONS, self.cons)):
            for res, rate in rates.items():
                if res not in RESOURCES:
                    raise ValidationError(
                        f"equipment {eid!r}: unknown resource {res!r} in {direction}"
                    )
                if not rate >= 0:
                    raise ValidationError(
                        f"equipment {eid!r}: negative {direction} rate for {res}"
                    )
        if not 0 <= self.p_frac_min <= self.p_frac_max <= 1:
            raise ValidationError(
                f"equipment {eid!r}: need 0 <= p_frac_min <= p_frac_max <= 1"
            )
        if self.wind_params is not None:
            wp = self.wind_params
            if not wp.cut_in < wp.rated <= wp.cut_out:
                raise ValidationError(
                    f"equipment {eid!r}: wind_params need cut_in < rated <= cut_out"
                )
        if self.kind == "RenewableWind" and self.wind_params is None:
            raise ValidationError(f"equipment {eid!r}: wind_params required")
        if self.kind == "RenewablePV" and self.pv_params is None:
            raise ValidationError(f"equipment {eid!r}: pv_params required")


@dataclass(frozen=True)
class ResourcePrice:
    purchase: float = 0.0  # cost per unit bought from outside the hub
    surplus: float = 0.0  # cost per unit of surplus output (usually 0)


@dataclass(frozen=True)
class Catalog:
    """Immutable equipment pool plus resource prices; safe to share across workers."""

    equipment: tuple[EquipmentSpec, ...]
    resource_prices: Mapping[str, ResourcePrice] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "equipment", tuple(self.equipment))
        object.__setattr__(self, "resource_prices", dict(self.resource_prices))

    def validate(self):
        seen = set()
        for spec in self.equipment:
            if spec.id in seen:
                raise ValidationError(f"duplicate equipment id {spec.id!r}")
            seen.add(spec.id)
            spec.validate()
        for res in self.resource_prices:
            if res not in RESOURCES:
                raise ValidationError(f"unknown resource {res!r} in resource_prices")

    def lookup(self, equip_id: str) -> EquipmentSpec:
        for spec in self.equipment:
            if spec.id == equip_id:
                return spec
        raise UnknownEquipment(f"no equipment with id {equip_id!r}")

    def ids(self) -> list[str]:
        return [spec.id for spec in self.equipment]

    def generators(self) -> list[EquipmentSpec]:
        return [s for s in self.equipment if s.kind == "Generator"]

    def storages(self) -> list[EquipmentSpec]:
        return [s for s in self.equipment if s.kind == "Storage"]

    def renewables(self) -> list[EquipmentSpec]:
        return [s for s in self.equipment if s.kind in ("RenewableWind", "RenewablePV")]

    def price(self, resource: str) -> ResourcePrice:
        return self.resource_prices.get(resource, ResourcePrice())


def coefficient(catalog: Catalog, equip_id: str, resource: str, direction: str) -> float:
    """Tabulated generation/consumption rate; 0.0 when the resource is absent."""
    spec = catalog.lookup(equip_id)
    if direction not in (GEN, CONS):
        raise ValueError(f"direction must be {GEN!r} or {CONS!r}, got {direction!r}")
    rates = spec.gen if direction == GEN else spec.cons
    return float(rates.get(resource, 0.0))


# Default equipment dataset.  Consumption/generation rates at unit power,
# power/capacity limits, and first-year cost coefficients for the 18 candidate
# devices.  Fixed build/maintenance costs (gamma) are zero: the published cost
# data carries only per-power and per-capacity columns.
# Wind power-curve speeds and PV conversion parameters are bundled engineering
# defaults, not part of the published dataset.

_E, _H, _B, _G, _O, _C = "Electricity", "Heat", "Biomass", "Gas", "Oil", "CO2"
_W, _CL, _H2, _WA = "WoodFuel", "Coal", "H2", "Water"

_DEFAULT_EQUIPMENT = (
    EquipmentSpec("WindTurbine-1", "RenewableWind", 100, 200000,
                  alpha0=20039.04, alpha_k=403.2, gen={_E: 1.0}),
    EquipmentSpec("WindTurbine-2", "RenewableWind", 100, 200000,
                  alpha0=20039.04, alpha_k=403.2, gen={_E: 1.0}),
    EquipmentSpec("WindTurbine-3", "RenewableWind", 100, 200000,
                  alpha0=20039.04, alpha_k=403.2, gen={_E: 1.0}),
    EquipmentSpec("Photovoltaic-1", "RenewablePV", 100, 200000,
                  alpha0=20744.64, alpha_k=248.6, gen={_E: 1.0}),
    EquipmentSpec("Photovoltaic-2", "RenewablePV", 100, 200000,
                  alpha0=20744.64, alpha_k=248.6, gen={_E: 1.0}),
    EquipmentSpec("Photovoltaic-3", "RenewablePV", 100, 200000,
                  alpha0=20744.64, alpha_k=248.6, gen={_E: 1.0}),
    EquipmentSpec("BiomassGenerator", "Generator", 2500, 500000,
                  alpha0=28082.88, alpha_k=1814.4, renewable=True,
                  gen={_E: 1.0, _C: 79.0}, cons={_B: 20.07}),
    EquipmentSpec("GasCogen-1", "Generator", 3350, 670000,
                  alpha0=8537.76, alpha_k=672.0,
                  gen={_E: 1.0, _H: 5.7, _C: 599.0}, cons={_G: 3.81}),
    EquipmentSpec("OilCogen-1", "Generator", 750, 150000,
                  alpha0=9172.8, alpha_k=530.9,
                  gen={_E: 1.0, _H: 2.5, _C: 738.0}, cons={_O: 11.3}),
    EquipmentSpec("LithiumIonBattery", "Storage", 1000, 500000,
                  cap_min=100000, cap_max=500000,
                  beta0=12096.0, alpha_k=134.4, beta_k=336.0,
                  gen={_E: 0.95}, cons={_E: 1.05}),
    EquipmentSpec("RecipEngine3", "Generator", 9341, 9341,
                  alpha0=10031.0, alpha_k=514.1,
                  gen={_E: 1.0, _H: 3.02, _C: 448.2}, cons={_G: 2.4}),
    EquipmentSpec("GasTurbine-1", "Generator", 3304, 3304,
                  alpha0=22967.0, alpha_k=762.05,
                  gen={_E: 1.0, _H: 6.32, _C: 361.5}, cons={_G: 4.18}),
    EquipmentSpec("SteamTurbine-1", "Generator", 500, 500,
                  alpha0=7952.0, alpha_k=604.8,
                  gen={_E: 1.0, _H: 41.9, _C: 247.6}, cons={_O: 57.4}),
    EquipmentSpec("MicroTurbine-3", "Generator", 950, 950,
                  alpha0=17500.0, alpha_k=725.8,
                  gen={_E: 1.0, _H: 4.93, _C: 369.7}, cons={_G: 3.76}),
    EquipmentSpec("FuelCell-1", "Generator", 1400, 1400,
                  alpha0=32200.0, alpha_k=2419.2,
                  gen={_E: 1.0, _H: 3.33, _C: 235.9}, cons={_G: 2.35}),
    EquipmentSpec("Biogasifier-1", "Generator", 6600, 6600,
                  alpha0=34392.0, alpha_k=2693.4, renewable=True,
                  gen={_E: 1.0, _C: 106.5}, cons={_W: 20.5}),
    EquipmentSpec("Electrolyzer", "Generator", 10000, 100000,
                  alpha0=5355.0, alpha_k=289.0,
                  gen={_H2: 1.0}, cons={_E: 1.32}),
    EquipmentSpec("MethanationReactor", "Generator", 51300, 51300,
                  alpha0=5580.1, alpha_k=210.6,
                  gen={_E: 0.002, _G: 1.0},
                  cons={_C: 177.14, _H2: 1.28, _WA: 0.748}),
)

# Synthetic price defaults (currency per resource unit); no price table is
# published, so these are placeholders meant to be overridden per study.
_DEFAULT_PRICES = {
    "Electricity": ResourcePrice(purchase=2.5),
    "Heat": ResourcePrice(),
    "Biomass": ResourcePrice(purchase=0.12),
    "Gas": ResourcePrice(purchase=1.2),
    "Oil": ResourcePrice(purchase=0.35),
    "CO2": ResourcePrice(),
    "WoodFuel": ResourcePrice(purchase=0.1),
    "Coal": ResourcePrice(purchase=0.15),
    "H2": ResourcePrice(),
    "Water": ResourcePrice(purchase=0.02),
}


def default_catalog() -> Catalog:
    """The bundled 18-equipment catalog with the default price placeholders."""
    cat = Catalog(equipment=_DEFAULT_EQUIPMENT, resource_prices=dict(_DEFAULT_PRICES))
    cat.validate()
    return cat


# JSON schema helpers.  Unknown keys are rejected everywhere so that typos in
# user files fail loudly instead of silently defaulting.

_EQUIP_KEYS = {
    "id", "kind", "rp_min", "rp_max", "cap_min", "cap_max",
    "alpha0", "beta0", "gamma0", "alpha_k", "beta_k", "gamma_k",
    "gen", "cons", "p_frac_min", "p_frac_max", "renewable",
    "wind_params", "pv_params",
}
_WIND_KEYS = {"cut_in", "rated", "cut_out"}
_PV_KEYS = {"efficiency", "temp_coeff", "ref_temp"}


def _reject_unknown(mapping: dict, allowed: set, context: str):
    unknown = set(mapping) - allowed
    if unknown:
        raise ParseError(f"{context}: unknown keys {sorted(unknown)}")


def equipment_to_dict(spec: EquipmentSpec) -> dict:
    d = {
        "id": spec.id,
        "kind": spec.kind,
        "rp_min": spec.rp_min,
        "rp_max": spec.rp_max,
        "cap_min": spec.cap_min,
        "cap_max": spec.cap_max,
        "alpha0": spec.alpha0,
        "beta0": spec.beta0,
        "gamma0": spec.gamma0,
        "alpha_k": spec.alpha_k,
        "beta_k": spec.beta_k,
        "gamma_k": spec.gamma_k,
        "gen": dict(spec.gen),
        "cons": dict(spec.cons),
        "p_frac_min": spec.p_frac_min,
        "p_frac_max": spec.p_frac_max,
        "renewable": spec.renewable,
    }
    if spec.wind_params is not None:
        wp = spec.wind_params
        d["wind_params"] = {"cut_in": wp.cut_in, "rated": wp.rated, "cut_out": wp.cut_out}
    if spec.pv_params is not None:
        pp = spec.pv_params
        d["pv_params"] = {
            "efficiency": pp.efficiency,
            "temp_coeff": pp.temp_coeff,
            "ref_temp": pp.ref_temp,
        }
    return d


def equipment_from_dict(d: dict) -> EquipmentSpec:
    if not isinstance(d, dict):
        raise ParseError("equipment entry must be an object")
    ctx = f"equipment {d.get('id', '?')!r}"
    _reject_unknown(d, _EQUIP_KEYS, ctx)
    kwargs = dict(d)
    wp = kwargs.pop("wind_params", None)
    pp = kwargs.pop("pv_params", None)
    if wp is not None:
        _reject_unknown(wp, _WIND_KEYS, f"{ctx} wind_params")
        kwargs["wind_params"] = WindParams(**wp)
    if pp is not None:
        _reject_unknown(pp, _PV_KEYS, f"{ctx} pv_params")
        kwargs["pv_params"] = PvParams(**pp)
    try:
        return EquipmentSpec(**kwargs)
    except TypeError as exc:
        raise ParseError(f"{ctx}: {exc}") from exc


def catalog_to_dict(catalog: Catalog) -> dict:
    return {
        "equipment": [equipment_to_dict(s) for s in catalog.equipment],
        "resource_prices": {
            res: {"purchase": p.purchase, "surplus": p.surplus}
            for res, p in catalog.resource_prices.items()
        },
    }


def catalog_from_dict(d: dict) -> Catalog:
    if not isinstance(d, dict):
        raise ParseError("catalog document must be an object")
    _reject_unknown(d, {"equipment", "resource_prices"}, "catalog")
    if "equipment" not in d:
        raise ParseError("catalog: missing 'equipment' array")
    equipment = tuple(equipment_from_dict(e) for e in d["equipment"])
    prices = {}
    for res, entry in d.get("resource_prices", {}).items():
        _reject_unknown(entry, {"purchase", "surplus"}, f"resource_prices[{res}]")
        prices[res] = ResourcePrice(
            purchase=entry.get("purchase", 0.0), surplus=entry.get("surplus", 0.0)
        )
    cat = Catalog(equipment=equipment, resource_prices=prices)
    cat.validate()
    return cat


def load_catalog(path) -> Catalog:
    """Load and validate a catalog JSON file."""
    text = Path(path).read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    return catalog_from_dict(doc)


def save_catalog(catalog: Catalog, path) -> None:
    Path(path).write_text(
        json.dumps(catalog_to_dict(catalog), indent=2) + "\n", encoding="utf-8"
    )
