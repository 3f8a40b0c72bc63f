"""Distance and accuracy measures between simulated and real KPIs."""

from .constraints import Tolerances, constraint_g, constraint_h, evaluation_index
from .ecdf import ecdf, ecdf_sq_integral, mean_ecdf, objective
from .evaluation import CalibrationObjective, check_reference, evaluate_point, index_label, score_outputs
from .intervals import t_interval

__all__ = [
    "CalibrationObjective",
    "Tolerances",
    "check_reference",
    "constraint_g",
    "constraint_h",
    "ecdf",
    "ecdf_sq_integral",
    "evaluate_point",
    "evaluation_index",
    "index_label",
    "mean_ecdf",
    "objective",
    "score_outputs",
    "t_interval",
]
