"""Data models shared across the simulation, metrics and optimizer layers."""

from .kpis import KpiIndex, KpiSampleSet
from .params import (
    Bounds,
    Granularity,
    ParamKey,
    ParamVector,
    clamp_to_problem,
    decision_keys,
    default_bounds,
    snap,
)
from .patient import Outcome, PatientRecord
from .results import (
    CellDiagnostics,
    CensusLog,
    EvaluationResult,
    HistoryEntry,
    ReplicationOutput,
    SolveReport,
)
from .scenario import CalibrationSettings, CapacityWindow, ScenarioConfig, SeatSchedule, WeibullSpec
from .step_function import StepFunction

__all__ = [
    "Bounds",
    "CalibrationSettings",
    "CapacityWindow",
    "CellDiagnostics",
    "CensusLog",
    "EvaluationResult",
    "Granularity",
    "HistoryEntry",
    "KpiIndex",
    "KpiSampleSet",
    "Outcome",
    "ParamKey",
    "ParamVector",
    "PatientRecord",
    "ReplicationOutput",
    "ScenarioConfig",
    "SeatSchedule",
    "SolveReport",
    "StepFunction",
    "WeibullSpec",
    "clamp_to_problem",
    "decision_keys",
    "default_bounds",
    "snap",
]
