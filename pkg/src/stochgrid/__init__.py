"""stochgrid: two-stage stochastic MILP design and operation studies for
renewable microgrids with storage, power-to-gas, and carbon cap-and-trade."""

from .catalog import (
    Catalog,
    EquipmentSpec,
    PvParams,
    RESOURCES,
    ResourcePrice,
    WindParams,
    coefficient,
    default_catalog,
    load_catalog,
    save_catalog,
)
from .model import (
    ForcedInstall,
    MilpInstance,
    StudyConfig,
    VarKey,
    build_instance,
    build_mean_value_instance,
    first_stage_design,
    fix_first_stage,
)
from .scenarios import (
    BaseCase,
    PolicyPair,
    PolicyTrajectory,
    Scenario,
    ScenarioSet,
    TimeGrid,
    assemble_scenarios,
    build_trajectory,
    constant_trajectory,
    load_profiles,
    pv_availability,
    wind_availability,
)

__version__ = "0.1.0"
