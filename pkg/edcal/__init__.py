"""edcal - calibration of emergency-department simulation service times."""

from .dataio import (
    gen_synthetic,
    initial_guess,
    load_dataset,
    load_params,
    load_scenario,
    load_settings,
    write_dataset,
)
from .metrics import evaluate_point
from .models import CalibrationSettings, KpiSampleSet, ParamVector, ScenarioConfig
from .optimizer import solve
from .services import CalibrationService, ReportService, SimulationService
from .simcore.replication import run_replication, run_replications

__version__ = "0.1.0"

__all__ = [
    "CalibrationService",
    "CalibrationSettings",
    "KpiSampleSet",
    "ParamVector",
    "ReportService",
    "ScenarioConfig",
    "SimulationService",
    "__version__",
    "evaluate_point",
    "gen_synthetic",
    "initial_guess",
    "load_dataset",
    "load_params",
    "load_scenario",
    "load_settings",
    "run_replication",
    "run_replications",
    "solve",
    "write_dataset",
]
