"""End-to-end calibration: real KPIs, starting point, lattice search, result files."""

import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path

import pandas as pd

from ..dataio.config import default_tolerances, problem_from_settings, write_params
from ..dataio.dataset import Dataset, ExamRequestAnnotation
from ..dataio.fitting import initial_guess
from ..metrics.evaluation import CalibrationObjective, check_reference
from ..models.kpis import KpiSampleSet
from ..models.params import ParamVector, clamp_to_problem
from ..models.results import SolveReport
from ..models.scenario import CalibrationSettings, ScenarioConfig
from ..optimizer.search import SolveSettings, solve
from ..types import EvaluationRow

logger = logging.getLogger(__name__)


def _json_safe(value: object) -> object:
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {k: _json_safe(v) for k, v in value.items()}
    return value


@dataclass
class CalibrationRun:
    """A finished calibration and the evaluator rows it produced."""

    report: SolveReport
    evaluations: list[EvaluationRow] = field(default_factory=list)
    feasible: bool = False


class CalibrationService:
    """Calibrates service-time parameters of a scenario against a dataset."""

    def __init__(
        self,
        cfg: ScenarioConfig,
        dataset: Dataset,
        settings: CalibrationSettings,
        seed: int,
        jobs: int = 1,
    ) -> None:
        self.cfg = cfg
        self.dataset = dataset
        self.settings = settings
        self.seed = seed
        self.jobs = jobs
        self.keys, self.bounds, self.granularity = problem_from_settings(settings)
        self.real_kpis: KpiSampleSet = dataset.kpis(cfg.window_days)
        check_reference(self.real_kpis)

    def starting_point(
        self,
        params: ParamVector | None = None,
        annotations: list[ExamRequestAnnotation] | None = None,
    ) -> ParamVector:
        """Given parameters clamped onto the problem, or the fitted initial guess."""
        if params is None:
            logger.info("fitting the starting point from the dataset")
            return initial_guess(self.dataset, annotations or [], self.cfg, self.settings)
        params.require(self.keys)
        return clamp_to_problem(params, self.bounds, self.granularity)

    def solve_settings(self) -> SolveSettings:
        s = self.settings
        return SolveSettings(
            eps0=s.eps0,
            initial_step=s.initial_step,
            eps_factor=s.eps_factor,
            feasibility_tol=s.feasibility_tol,
            f_target=s.f_target,
        )

    def calibrate(self, start: ParamVector) -> CalibrationRun:
        objective = CalibrationObjective(
            self.cfg,
            self.real_kpis,
            self.settings.n_reps,
            self.seed,
            tolerances=default_tolerances(self.settings),
            jobs=self.jobs,
        )
        with objective:
            report = solve(
                objective,
                start,
                self.bounds,
                self.granularity,
                self.settings.budget,
                seed=self.seed,
                settings=self.solve_settings(),
            )
        feasible = report.feasible(self.settings.feasibility_tol)
        if not feasible:
            logger.warning("no feasible point found; best violation %.4g", report.best_max_violation)
        return CalibrationRun(report, objective.rows, feasible)

    def write(self, run: CalibrationRun, out_dir: str | Path) -> list[Path]:
        """History, summary, best parameters, residuals and evaluation diagnostics."""
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        report = run.report

        history = out / "solve_history.csv"
        pd.DataFrame([h.as_row() for h in report.history]).to_csv(history, index=False, lineterminator="\n")

        summary = out / "solve_summary.json"
        data = report.summary()
        data["feasible"] = run.feasible
        data["seed"] = self.seed
        data["n_reps"] = self.settings.n_reps
        data["budget"] = self.settings.budget
        summary.write_text(json.dumps(_json_safe(data), indent=2) + "\n")

        best = write_params(report.best_point, out / "best_params.json")

        residuals = out / "residuals.csv"
        rows = []
        if report.best_result is not None:
            rows = [
                {
                    "tag": d.tag.value,
                    "unit": d.unit.value,
                    "kpi": d.kind,
                    "mu_sim": d.mu_sim,
                    "mu_real": d.mu_real,
                    "sd_sim": d.sd_sim,
                    "sd_real": d.sd_real,
                    "g": d.g,
                    "h": d.h,
                    "integral": d.integral,
                    "dropped": d.dropped,
                }
                for d in report.best_result.diagnostics
            ]
        pd.DataFrame(
            rows,
            columns=["tag", "unit", "kpi", "mu_sim", "mu_real", "sd_sim", "sd_real", "g", "h", "integral", "dropped"],
        ).to_csv(residuals, index=False, lineterminator="\n")

        evaluations = out / "evaluations.csv"
        pd.DataFrame(run.evaluations, columns=["eval_index", "f", "max_g", "max_h", "wall_time"]).to_csv(
            evaluations, index=False, lineterminator="\n",
        )
        return [history, summary, best, residuals, evaluations]
