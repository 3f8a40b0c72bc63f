"""Synthetic ground-truth datasets.

A synthetic dataset is what the simulator produces at known parameters,
written with the same schema and precision as real data. The t5 column is
left empty so that DIT is t6 - t2 on both sides of the comparison.
"""

import logging

from ..edmodel.kpis import to_period_records
from ..models.params import ParamVector
from ..models.patient import PatientRecord
from ..models.scenario import ScenarioConfig
from ..simcore.replication import run_replications
from .dataset import Dataset, ExamRequestAnnotation

logger = logging.getLogger(__name__)


def synthesize_annotations(records: list[PatientRecord]) -> list[ExamRequestAnnotation]:
    """One exam request at the simulated visit end of every visited patient."""
    return [ExamRequestAnnotation(rec.id, [rec.t3]) for rec in records if rec.t2 is not None and rec.t3 is not None]


def _window_records(
    true_params: ParamVector,
    cfg: ScenarioConfig,
    seed: int,
    n_reps: int,
) -> tuple[list[PatientRecord], int]:
    """Window records of every replication, back to back in period time and renumbered."""
    outputs = run_replications(cfg, true_params, n_reps, seed)
    records: list[PatientRecord] = []
    for out in outputs:
        for rec in to_period_records(out.records, *cfg.period_frame(out.rep_index)):
            rec.id = len(records)
            records.append(rec)
    return records, cfg.window_days * n_reps


def gen_synthetic_annotated(
    true_params: ParamVector,
    cfg: ScenarioConfig,
    seed: int,
    n_reps: int = 1,
) -> tuple[Dataset, list[ExamRequestAnnotation]]:
    """Synthetic dataset plus exam-request annotations at the true visit ends."""
    records, period_days = _window_records(true_params, cfg, seed, n_reps)
    annotations = synthesize_annotations(records)
    dataset = Dataset([rec.public() for rec in records], cfg.dataset_start_day(), period_days)
    logger.info("generated %r with %d annotations", dataset, len(annotations))
    return dataset, annotations


def gen_synthetic(true_params: ParamVector, cfg: ScenarioConfig, seed: int, n_reps: int = 1) -> Dataset:
    """Simulate at ``true_params`` and return the window records as a Dataset.

    Args:
    ----
        true_params: Parameters the dataset is generated from
        cfg: Scenario; the statistics window becomes the dataset period
        seed: Base seed of the replications
        n_reps: Replications concatenated back to back in period time, one
            statistics window each

    Returns:
    -------
        Dataset with times rounded to four decimals and no t5 values. Read
        back with Dataset.kpis and the same window, it scores exactly like
        the replications it came from.

    """
    dataset, _ = gen_synthetic_annotated(true_params, cfg, seed, n_reps)
    return dataset
