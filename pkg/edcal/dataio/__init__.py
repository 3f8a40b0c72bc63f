"""Dataset files, synthetic data, Weibull fitting and configuration loading."""

from .config import (
    default_tolerances,
    env_defaults,
    load_params,
    load_scenario,
    load_settings,
    problem_from_settings,
    write_params,
)
from .dataset import (
    Dataset,
    ExamRequestAnnotation,
    load_annotations,
    load_dataset,
    validate_annotations,
    validate_records,
    write_annotations,
    write_dataset,
)
from .fitting import fit_weibull, initial_guess
from .synthetic import gen_synthetic, gen_synthetic_annotated, synthesize_annotations

__all__ = [
    "Dataset",
    "ExamRequestAnnotation",
    "default_tolerances",
    "env_defaults",
    "fit_weibull",
    "gen_synthetic",
    "gen_synthetic_annotated",
    "initial_guess",
    "load_annotations",
    "load_dataset",
    "load_params",
    "load_scenario",
    "load_settings",
    "problem_from_settings",
    "synthesize_annotations",
    "validate_annotations",
    "validate_records",
    "write_annotations",
    "write_dataset",
    "write_params",
]
