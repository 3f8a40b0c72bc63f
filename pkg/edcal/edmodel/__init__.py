"""ED trajectory logic: routing, patient flow and KPI collection."""

from .kpis import (
    census_log_from_records,
    extract_kpis,
    hourly_census,
    hourly_census_by_cell,
    segmented_kpis,
    to_period_records,
)
from .routing import assign_tag_and_unit, route_from_uniforms, triage_duration, triage_params
from .trajectory import N_DRAWS, DrawSlot, Patient, build_engine, simulate_patient

__all__ = [
    "N_DRAWS",
    "DrawSlot",
    "Patient",
    "assign_tag_and_unit",
    "build_engine",
    "census_log_from_records",
    "extract_kpis",
    "hourly_census",
    "hourly_census_by_cell",
    "route_from_uniforms",
    "segmented_kpis",
    "simulate_patient",
    "to_period_records",
    "triage_duration",
    "triage_params",
]
