"""Batch front door: validate inputs, build and emit MPS, solve, report, and
run value-of-stochastic-solution studies from a single run-configuration file.

Exit codes: 0 success, 2 configuration/validation problems, 3 solver finished
without an optimal solution, 1 any other runtime failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from . import analysis
from .catalog import Catalog, default_catalog, load_catalog
from .errors import LimitExceeded, ParseError, StochgridError, ValidationError
from .model import (
    ForcedInstall,
    MilpInstance,
    StudyConfig,
    build_instance,
)
from .scenarios import (
    BaseCase,
    PolicyPair,
    ScenarioSet,
    TimeGrid,
    assemble_scenarios,
    build_trajectory,
    constant_trajectory,
    load_profiles,
)
from .solve import (
    ExactBackend,
    ExternalBackend,
    SolveLimits,
    default_solver_command,
    parse_solution_file,
    write_mps,
)
from .solve.mps import column_name

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_CONFIG = 2
EXIT_NOT_OPTIMAL = 3

_RUN_KEYS = {"catalog", "grid", "bases", "policies", "study", "backend",
             "solver_cmd", "output_dir"}
_GRID_KEYS = {"intervals_per_day", "delta_t", "years", "days_per_year", "block_years"}
_BASE_KEYS = {"name", "profile"}
_POLICY_KEYS = {"name", "cet_base", "cet_change", "emission_base", "emission_change"}
_STUDY_KEYS = {
    "include_cap_trade_income", "include_sng_income", "escalate_cap_trade",
    "max_equipment", "elec_purchase_cap", "purchasable", "surplus_cap",
    "discount_rate", "inflation", "peak_coeff", "spin_fraction", "emission_base",
    "forced_installs", "relax_elec_purchase_cap", "relax_elec_surplus",
}
_FORCED_KEYS = {"equipment", "min_rated_power", "forced_on"}


@dataclass
class RunConfig:
    catalog: Catalog
    grid: TimeGrid
    bases: list
    policies: list
    study: StudyConfig
    backend: str = "exact"
    solver_cmd: Optional[str] = None
    output_dir: Path = Path("out")
    path: Optional[Path] = None


def _reject_unknown(mapping, allowed, context):
    unknown = set(mapping) - allowed
    if unknown:
        raise ParseError(f"{context}: unknown keys {sorted(unknown)}")


def _parse_study(doc: dict) -> StudyConfig:
    _reject_unknown(doc, _STUDY_KEYS, "study")
    kwargs = dict(doc)
    forced = []
    for entry in kwargs.pop("forced_installs", []):
        _reject_unknown(entry, _FORCED_KEYS, "forced_installs entry")
        forced.append(ForcedInstall(**entry))
    if forced:
        kwargs["forced_installs"] = tuple(forced)
    base = StudyConfig()
    merged = {}
    for key in _STUDY_KEYS - {"forced_installs"}:
        if key in kwargs:
            merged[key] = kwargs[key]
    if "purchasable" in merged:
        merged["purchasable"] = {**dict(base.purchasable), **merged["purchasable"]}
    if "surplus_cap" in merged:
        merged["surplus_cap"] = {**dict(base.surplus_cap), **merged["surplus_cap"]}
    cfg = StudyConfig(**merged, **({"forced_installs": tuple(forced)} if forced else {}))
    cfg.validate()
    return cfg


def _parse_policy(doc: dict, grid: TimeGrid, study: StudyConfig) -> PolicyPair:
    _reject_unknown(doc, _POLICY_KEYS, "policy entry")
    cet_base = doc.get("cet_base", 0.0)
    cet_change = doc.get("cet_change", 0.0)
    e_base = doc.get("emission_base", study.emission_base)
    e_change = doc.get("emission_change", 0.0)
    cet = (build_trajectory(cet_base, cet_change, grid) if cet_base > 0
           else constant_trajectory(max(cet_base, 0.0), grid))
    limit = build_trajectory(e_base, e_change, grid)
    return PolicyPair(doc.get("name", "policy"), cet, limit)


def load_run_config(path) -> RunConfig:
    """Parse a run-configuration JSON file; relative paths resolve against it."""
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ParseError(f"run config not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    _reject_unknown(doc, _RUN_KEYS, "run config")
    root = path.parent

    grid_doc = doc.get("grid", {})
    _reject_unknown(grid_doc, _GRID_KEYS, "grid")
    grid = TimeGrid(**grid_doc)

    study = _parse_study(doc.get("study", {}))

    cat_ref = doc.get("catalog", "default")
    if cat_ref == "default":
        catalog = default_catalog()
    else:
        cat_path = (root / cat_ref).resolve()
        if not cat_path.exists():
            raise ParseError(f"catalog file not found: {cat_path}")
        catalog = load_catalog(cat_path)

    bases = []
    for entry in doc.get("bases", []):
        _reject_unknown(entry, _BASE_KEYS, "base entry")
        profile = (root / entry["profile"]).resolve()
        if not profile.exists():
            raise ParseError(f"profile file not found: {profile}")
        bases.append(load_profiles(profile, name=entry.get("name")))
    if not bases:
        raise ParseError("run config: at least one base profile is required")

    policies = [
        _parse_policy(p, grid, study) for p in doc.get("policies", [{"name": "base"}])
    ]

    return RunConfig(
        catalog=catalog,
        grid=grid,
        bases=bases,
        policies=policies,
        study=study,
        backend=doc.get("backend", "exact"),
        solver_cmd=doc.get("solver_cmd"),
        output_dir=Path(doc.get("output_dir", "out")),
        path=path,
    )


def make_scenarios(rc: RunConfig) -> ScenarioSet:
    return assemble_scenarios(rc.bases, rc.policies, rc.grid, rc.catalog)


def make_backend(rc: RunConfig, args) -> object:
    backend = getattr(args, "backend", None) or rc.backend
    if backend == "exact":
        return ExactBackend(SolveLimits())
    if backend == "external":
        template = (
            getattr(args, "solver_cmd", None)
            or rc.solver_cmd
            or default_solver_command()
        )
        if not template:
            raise ParseError(
                "external backend needs --solver-cmd, a solver_cmd config entry, "
                "or the solver template environment variable"
            )
        return ExternalBackend(template)
    raise ParseError(f"unknown backend {backend!r}")


def _outdir(rc: RunConfig, args) -> Path:
    out = Path(getattr(args, "out", None) or rc.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_validate(args) -> int:
    rc = load_run_config(args.config)
    sset = make_scenarios(rc)
    instance = build_instance(rc.catalog, sset, rc.study)
    cont = instance.num_variables - instance.num_binaries
    print(f"catalog equipment   {len(rc.catalog.equipment)}")
    print(f"scenarios           {len(sset)}")
    print("probabilities       " + " ".join(
        f"{s.probability:.6g}" for s in sset.scenarios))
    print(f"continuous columns  {cont}")
    print(f"binary columns      {instance.num_binaries}")
    print(f"constraints         {instance.num_constraints}")
    return EXIT_OK


def cmd_build(args) -> int:
    rc = load_run_config(args.config)
    sset = make_scenarios(rc)
    instance = build_instance(rc.catalog, sset, rc.study)
    out = _outdir(rc, args)
    mps_path = out / "model.mps"
    write_mps(instance, mps_path)
    print(f"wrote {mps_path}")
    return EXIT_OK


def write_solution_file(path, instance: MilpInstance, solution) -> None:
    lines = [f"status {solution.status}"]
    if solution.is_optimal:
        lines.append(f"objective {solution.objective!r}")
        for j, var in enumerate(instance.variables):
            lines.append(f"{column_name(j)} {solution.values.get(var.key, 0.0)!r}")
    Path(path).write_text("\n".join(lines) + "\n")


def _write_reports(out, rc, sset, instance, solution) -> None:
    design = analysis.extract_design(solution, rc.catalog)
    with (out / "design.csv").open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["equipment", "rated_kW", "capacity_kWh"])
        for row in design.rows:
            writer.writerow([row.equipment, repr(row.rated_power),
                             "" if row.capacity is None else repr(row.capacity)])
    with (out / "dispatch.csv").open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["scenario", "year", "interval", "source", "kWh"])
        for scen in sset.scenarios:
            for year in range(1, sset.grid.years + 1):
                rows = analysis.dispatch_table(
                    solution, rc.catalog, sset, rc.study, scen.id, year
                )
                for r in rows:
                    for eq in sorted(r.supply):
                        writer.writerow([scen.id, year, r.interval, eq, repr(r.supply[eq])])
                    writer.writerow([scen.id, year, r.interval, "purchase", repr(r.purchase)])
                    writer.writerow([scen.id, year, r.interval, "demand", repr(r.demand)])
                    for eq in sorted(r.charge):
                        writer.writerow(
                            [scen.id, year, r.interval, f"charge:{eq}", repr(r.charge[eq])]
                        )
                    writer.writerow([scen.id, year, r.interval, "surplus", repr(r.surplus)])
                    writer.writerow([scen.id, year, r.interval, "reserve", repr(r.reserve)])
    with (out / "emissions.csv").open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["scenario", "year", "tCO2"])
        for scen in sset.scenarios:
            for year in range(1, sset.grid.years + 1):
                tco2 = analysis.annual_emissions(solution, sset, scen.id, year)
                writer.writerow([scen.id, year, repr(tco2)])
    costs = analysis.cost_breakdown(solution, rc.catalog, sset, rc.study)
    with (out / "costs.csv").open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["component", "value"])
        for name, value in [
            ("initial", costs.initial),
            ("om", costs.om),
            ("purchases", costs.purchases),
            ("peak", costs.peak),
            ("cap_trade_income", costs.cap_trade_income),
            ("sng_income", costs.sng_income),
            ("net_present_cost", costs.net_present_cost),
        ]:
            writer.writerow([name, repr(value)])


def cmd_solve(args) -> int:
    rc = load_run_config(args.config)
    sset = make_scenarios(rc)
    instance = build_instance(rc.catalog, sset, rc.study)
    out = _outdir(rc, args)
    write_mps(instance, out / "model.mps")
    backend = make_backend(rc, args)
    solution = backend.solve(instance)
    write_solution_file(out / "solution.sol", instance, solution)
    print(f"status {solution.status}")
    if not solution.is_optimal:
        return EXIT_NOT_OPTIMAL
    _write_reports(out, rc, sset, instance, solution)
    print(f"net present cost {solution.objective:.6f}")
    return EXIT_OK


def cmd_report(args) -> int:
    rc = load_run_config(args.config)
    sset = make_scenarios(rc)
    instance = build_instance(rc.catalog, sset, rc.study)
    solution = parse_solution_file(args.solution, instance)
    if not solution.is_optimal:
        print(f"status {solution.status}")
        return EXIT_NOT_OPTIMAL
    out = _outdir(rc, args)
    _write_reports(out, rc, sset, instance, solution)
    print(f"reports written to {out}")
    return EXIT_OK


def cmd_vss(args) -> int:
    rc = load_run_config(args.config)
    sset = make_scenarios(rc)
    backend = make_backend(rc, args)
    result = analysis.compute_vss(
        rc.catalog, sset, rc.study, backend, relaxed=args.relaxed
    )
    cfg = rc.study.relaxed() if args.relaxed else rc.study
    evpi = analysis.compute_evpi(rc.catalog, sset, cfg, backend)
    out = _outdir(rc, args)
    with (out / "vss.csv").open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["ss", "evs", "vss", "relaxed"])
        writer.writerow([
            repr(result.ss),
            "+inf" if result.infinite else repr(result.evs),
            result.format_vss(),
            str(result.relaxed).lower(),
        ])
    print(f"SS   {result.ss!r}")
    print(f"EVS  {'+inf' if result.infinite else repr(result.evs)}")
    print(f"VSS  {result.format_vss()}")
    print(f"EVPI {evpi!r}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stochgrid",
        description="Stochastic microgrid design studies: build, solve, analyze.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, solver=False):
        p.add_argument("--config", required=True, help="run-configuration JSON")
        p.add_argument("--out", default=None, help="output directory")
        if solver:
            p.add_argument("--backend", choices=["exact", "external"], default=None)
            p.add_argument("--solver-cmd", dest="solver_cmd", default=None,
                           help="external command template with {mps} and {sol}")

    p = sub.add_parser("validate", help="load inputs, build the instance, print counts")
    common(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("build", help="write the MPS file only")
    common(p)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("solve", help="solve and write all artifacts")
    common(p, solver=True)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("report", help="regenerate report CSVs from a solution file")
    common(p)
    p.add_argument("--solution", required=True, help="solution file from solve")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("vss", help="value of the stochastic solution study")
    common(p, solver=True)
    p.add_argument("--relaxed", action="store_true",
                   help="lift the electricity purchase cap and surplus bound")
    p.set_defaults(func=cmd_vss)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except LimitExceeded as exc:
        print(f"error: {exc} (use --backend external for large instances)",
              file=sys.stderr)
        return EXIT_ERROR
    except StochgridError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    raise SystemExit(main())
