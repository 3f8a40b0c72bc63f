"""Service layer used by the command-line front end."""

from .calibration_service import CalibrationRun, CalibrationService
from .report_service import ReportService
from .simulation_service import SimulationService, folded_counts, patient_count_rows

__all__ = [
    "CalibrationRun",
    "CalibrationService",
    "ReportService",
    "SimulationService",
    "folded_counts",
    "patient_count_rows",
]
