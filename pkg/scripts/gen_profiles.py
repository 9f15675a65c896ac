#!/usr/bin/env python3
"""Regenerate the bundled synthetic profile CSVs (deterministic, no RNG).

Profiles are closed-form diurnal shapes scaled per base case, with demand
growth applied per policy block.  Run from the repository root:

    python scripts/gen_profiles.py
"""

from __future__ import annotations

import csv
from pathlib import Path

DATA = Path(__file__).resolve().parent.parent / "src" / "stochgrid" / "data"

SHAPES = {
    6: {
        "elec": [0.55, 0.65, 0.85, 0.95, 1.0, 0.75],
        "irr": [0.0, 0.15, 0.75, 1.0, 0.35, 0.0],
        "wind": [1.0, 1.1, 1.2, 1.1, 1.0, 0.9],
        "temp": [0.0, 0.1, 0.55, 1.0, 0.7, 0.3],
    },
    4: {
        "elec": [0.6, 0.9, 1.0, 0.7],
        "irr": [0.0, 0.8, 0.9, 0.1],
        "wind": [1.0, 1.15, 1.05, 0.95],
        "temp": [0.1, 0.6, 1.0, 0.4],
    },
}

# name -> (demand_peak_kW, wind_base_ms, irr_peak_kW, temp_min_C, temp_max_C)
FAMILIES = {
    # presets: 20-year horizon, 6 intervals/day, growth per 5-year block
    "standard": {
        "years": 20, "T": 6, "block": 5, "growth": 0.05, "heat_frac": 0.1,
        "bases": {
            "likely": (52000.0, 7.5, 0.95, 16.0, 30.0),
            "midlikely": (40000.0, 6.5, 0.82, 14.0, 28.0),
            "unlikely": (30000.0, 5.0, 0.70, 12.0, 26.0),
        },
    },
    # desk: 2-year horizon for the oracle-equivalence instance
    "desk": {
        "years": 2, "T": 6, "block": 1, "growth": 0.05, "heat_frac": 0.0,
        "bases": {
            "likely": (2600.0, 7.5, 0.95, 16.0, 30.0),
            "midlikely": (1900.0, 6.5, 0.82, 14.0, 28.0),
            "unlikely": (1400.0, 5.0, 0.70, 12.0, 26.0),
        },
    },
    # desk4: 1-year, 4-interval horizon for the VSS fixtures
    "desk4": {
        "years": 1, "T": 4, "block": 1, "growth": 0.0, "heat_frac": 0.0,
        "bases": {
            "likely": (2400.0, 7.5, 0.9, 16.0, 30.0),
            "midlikely": (1800.0, 6.5, 0.8, 14.0, 28.0),
            "unlikely": (1300.0, 5.0, 0.7, 12.0, 26.0),
        },
    },
}


def write_profile(path, years, T, block, growth, heat_frac, params):
    peak, wind_base, irr_peak, temp_min, temp_max = params
    shape = SHAPES[T]
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([
            "year", "interval", "wind_speed", "irradiance", "temperature",
            "demand_electricity", "demand_heat",
        ])
        for year in range(1, years + 1):
            scale = (1.0 + growth) ** ((year - 1) // block)
            for t in range(1, T + 1):
                wind = wind_base * shape["wind"][t - 1]
                irr = irr_peak * shape["irr"][t - 1]
                temp = temp_min + (temp_max - temp_min) * shape["temp"][t - 1]
                elec = peak * shape["elec"][t - 1] * scale
                heat = heat_frac * elec
                writer.writerow([year, t] + [repr(v) for v in (wind, irr, temp, elec, heat)])


def main():
    DATA.mkdir(parents=True, exist_ok=True)
    for family, cfg in FAMILIES.items():
        for name, params in cfg["bases"].items():
            prefix = "" if family == "standard" else family + "_"
            path = DATA / f"{prefix}{name}.csv"
            write_profile(
                path, cfg["years"], cfg["T"], cfg["block"], cfg["growth"],
                cfg["heat_frac"], params,
            )
            print(f"wrote {path}")


if __name__ == "__main__":
    main()
