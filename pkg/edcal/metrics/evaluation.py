"""Sample-average evaluation of a parameter vector.

The replications of every evaluation share one base seed, so evaluating the
same point twice gives the same result and differences between points are
not blurred by sampling noise.
"""

import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ..errors import DegenerateReferenceError, EmptySampleError
from ..models.kpis import KpiIndex, KpiSampleSet
from ..models.params import ParamVector
from ..models.results import CellDiagnostics, EvaluationResult, ReplicationOutput
from ..models.scenario import ScenarioConfig
from ..models.step_function import StepFunction
from ..simcore.replication import run_replications
from ..types import EvaluationRow
from .constraints import Tolerances, constraint_g, constraint_h, evaluation_index
from .ecdf import ecdf, ecdf_sq_integral, mean_ecdf, objective

logger = logging.getLogger(__name__)


def index_label(idx: KpiIndex) -> str:
    tag, unit, kind = idx
    return f"{tag.value}/{unit.value}/{kind}"


def check_reference(real_kpis: KpiSampleSet, index: list[KpiIndex] | None = None) -> None:
    """Raise EmptySampleError if a compared cell has no real samples."""
    real = real_kpis.folded()
    empty = [index_label(i) for i in (index or evaluation_index()) if real.count(i) == 0]
    if empty:
        raise EmptySampleError(f"real data has no samples for: {', '.join(empty)}")


def _std(values: np.ndarray) -> float:
    return float(values.std(ddof=1)) if values.size >= 2 else math.nan


@dataclass(frozen=True)
class CellSummary:
    """Replication-averaged statistics of one KPI cell."""

    ecdf: StepFunction
    mean: float
    std: float
    count: float


def summarize(parts: list[np.ndarray]) -> CellSummary | None:
    """Mean ECDF, mean of means and mean of stds over the non-empty parts.

    Parts with fewer than two samples have no std; when none has one the std
    is NaN. Returns None when every part is empty.
    """
    present = [a for a in parts if a.size]
    if not present:
        return None
    stds = [_std(a) for a in present if a.size >= 2]
    return CellSummary(
        ecdf=mean_ecdf([ecdf(a) for a in present]),
        mean=float(np.mean([a.mean() for a in present])),
        std=float(np.mean(stds)) if stds else math.nan,
        count=float(np.mean([a.size for a in parts])),
    )


def score_outputs(
    outputs: list[ReplicationOutput],
    real_kpis: KpiSampleSet,
    tolerances: Tolerances | None = None,
) -> EvaluationResult:
    """Objective and constraints of replication outputs against real samples.

    mu_sim and sigma_sim are means over replications of the per-replication
    sample mean and std (n-1 denominator). The simulated ECDF is the pointwise
    mean of per-replication ECDFs. Replications with an empty cell are skipped
    for that cell; a cell empty in all of them fails the evaluation. A
    segmented real sample set is summarized the same way, segment by segment.
    """
    tolerances = tolerances or Tolerances.default()
    index = evaluation_index()
    real = real_kpis.folded()
    real_parts = real.parts()
    sims = [o.kpis.folded() for o in outputs]

    sim_fs: dict[KpiIndex, StepFunction] = {}
    real_fs: dict[KpiIndex, StepFunction] = {}
    g = np.empty(len(index))
    h = np.empty(len(index))
    diagnostics: list[CellDiagnostics] = []
    failed: list[str] = []

    for j, idx in enumerate(index):
        real_cell = summarize([p.get(*idx) for p in real_parts])
        if real_cell is None:
            raise EmptySampleError(f"real data has no samples for {index_label(idx)}")
        sim_cell = summarize([s.get(*idx) for s in sims])
        if sim_cell is None:
            failed.append(index_label(idx))
            g[j] = h[j] = math.inf
            continue

        sim_fs[idx] = sim_cell.ecdf
        real_fs[idx] = real_cell.ecdf
        mu_sim, mu_real = sim_cell.mean, real_cell.mean
        sd_sim = 0.0 if math.isnan(sim_cell.std) else sim_cell.std
        sd_real = real_cell.std

        dropped = False
        try:
            g[j] = constraint_g(mu_sim, mu_real, tolerances.tol_mu[idx])
        except DegenerateReferenceError:
            logger.warning("dropping mean constraint for %s: zero real mean", index_label(idx))
            g[j] = -tolerances.tol_mu[idx]
            dropped = True
        try:
            if math.isnan(sd_real):
                raise DegenerateReferenceError("fewer than two real samples")
            h[j] = constraint_h(sd_sim, sd_real, tolerances.tol_sigma[idx])
        except DegenerateReferenceError:
            logger.warning("dropping std constraint for %s: degenerate real std", index_label(idx))
            h[j] = -tolerances.tol_sigma[idx]
            dropped = True

        diagnostics.append(
            CellDiagnostics(
                tag=idx[0],
                unit=idx[1],
                kind=idx[2],
                mu_sim=mu_sim,
                mu_real=mu_real,
                sd_sim=sd_sim,
                sd_real=sd_real,
                count_sim=sim_cell.count,
                count_real=real.count(idx),
                integral=ecdf_sq_integral(sim_fs[idx], real_fs[idx]),
                g=float(g[j]),
                h=float(h[j]),
                dropped=dropped,
            ),
        )

    labels = [index_label(i) for i in index]
    if failed:
        logger.info("evaluation failed: no simulated samples for %s", ", ".join(failed))
        return EvaluationResult(
            f=math.inf, g=g, h=h, failed=True, labels=labels, diagnostics=diagnostics, failed_cells=failed,
        )
    return EvaluationResult(f=objective(sim_fs, real_fs), g=g, h=h, labels=labels, diagnostics=diagnostics)


def evaluate_point(
    params: ParamVector,
    cfg: ScenarioConfig,
    real_kpis: KpiSampleSet,
    n_reps: int,
    base_seed: int,
    tolerances: Tolerances | None = None,
    parallel: bool = False,
    jobs: int | None = None,
    executor: ProcessPoolExecutor | None = None,
) -> EvaluationResult:
    """Run n_reps replications at ``params`` and score them against the real KPIs."""
    started = time.perf_counter()
    outputs = run_replications(cfg, params, n_reps, base_seed, parallel=parallel, jobs=jobs, executor=executor)
    result = score_outputs(outputs, real_kpis, tolerances)
    result.wall_time = time.perf_counter() - started
    return result


@dataclass
class CalibrationObjective:
    """Evaluator bound to a scenario, a reference dataset and a fixed seed.

    Use as a context manager to keep one worker pool alive across all
    evaluations of a solve.
    """

    cfg: ScenarioConfig
    real_kpis: KpiSampleSet
    n_reps: int
    base_seed: int
    tolerances: Tolerances = field(default_factory=Tolerances.default)
    jobs: int = 1
    rows: list[EvaluationRow] = field(default_factory=list)
    _pool: ProcessPoolExecutor | None = field(default=None, init=False, repr=False)

    def __post_init__(self) -> None:
        check_reference(self.real_kpis)

    def __enter__(self) -> "CalibrationObjective":
        if self.jobs > 1 and self.n_reps > 1:
            self._pool = ProcessPoolExecutor(max_workers=self.jobs)
        return self

    def __exit__(self, *exc: object) -> None:
        if self._pool is not None:
            self._pool.shutdown()
            self._pool = None

    def __call__(self, point: ParamVector) -> EvaluationResult:
        result = evaluate_point(
            point,
            self.cfg,
            self.real_kpis,
            self.n_reps,
            self.base_seed,
            tolerances=self.tolerances,
            executor=self._pool,
        )
        self.rows.append(
            {
                "eval_index": len(self.rows),
                "f": result.f,
                "max_g": result.max_g,
                "max_h": result.max_h,
                "wall_time": result.wall_time,
            },
        )
        logger.info("evaluation %d: %r (%.2fs)", len(self.rows) - 1, result, result.wall_time)
        return result
