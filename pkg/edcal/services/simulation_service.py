"""Simulation runs and their output files."""

import json
import logging
from pathlib import Path

import pandas as pd

from ..dataio.dataset import Dataset, write_dataset
from ..edmodel.kpis import (
    census_log_from_records,
    extract_kpis,
    hourly_census_by_cell,
    to_period_records,
)
from ..metrics.intervals import t_interval
from ..models.params import ParamVector
from ..models.results import ReplicationOutput
from ..models.scenario import ScenarioConfig
from ..simcore.audit import audit_census, audit_conservation, audit_trace
from ..simcore.replication import run_replications
from ..tags import DECISION_PAIRS, FEASIBLE_PAIRS, FOLDED_PAIRS, Cell
from ..types import PatientCountRow

logger = logging.getLogger(__name__)


def folded_counts(counts: dict[Cell, int]) -> dict[Cell, int]:
    """Patient counts with folded pairs merged into their parameter pair."""
    out = dict.fromkeys(DECISION_PAIRS, 0)
    for cell, n in counts.items():
        out[FOLDED_PAIRS.get(cell, cell)] += n
    return out


def patient_count_rows(per_rep: list[dict[Cell, int]], real: dict[Cell, int] | None = None) -> list[PatientCountRow]:
    """Mean count per (tag, unit) over replications with a 95% t interval."""
    rows: list[PatientCountRow] = []
    folded = [folded_counts(c) for c in per_rep]
    real_folded = folded_counts(real) if real is not None else None
    for cell in DECISION_PAIRS:
        mean, lo, hi = t_interval([c[cell] for c in folded])
        row: PatientCountRow = {
            "tag": cell[0].value,
            "unit": cell[1].value,
            "sim_mean": mean,
            "ci_low": lo,
            "ci_high": hi,
            "real": real_folded[cell] if real_folded is not None else None,
        }
        rows.append(row)
    return rows


class SimulationService:
    """Runs replications at fixed parameters and writes their outputs."""

    def __init__(
        self,
        cfg: ScenarioConfig,
        params: ParamVector,
        seed: int,
        jobs: int = 1,
        trace: bool = False,
    ) -> None:
        self.cfg = cfg
        self.params = params
        self.seed = seed
        self.jobs = jobs
        self.trace = trace

    def run(self, n_reps: int) -> list[ReplicationOutput]:
        outputs = run_replications(
            self.cfg, self.params, n_reps, self.seed, parallel=self.jobs > 1, jobs=self.jobs, trace=self.trace,
        )
        logger.info("ran %d replications (seed %d)", n_reps, self.seed)
        return outputs

    def period_dataset(self, output: ReplicationOutput) -> Dataset:
        """Window records of one replication in dataset form."""
        records = [rec.public() for rec in to_period_records(output.records, *self.cfg.period_frame())]
        return Dataset(records, self.cfg.dataset_start_day(), self.cfg.window_days)

    def audit(self, output: ReplicationOutput) -> list[str]:
        problems = audit_conservation(output) + audit_census(output.census_log)
        if output.trace is not None:
            problems += audit_trace(output.trace)
        for problem in problems:
            logger.warning("rep %d audit: %s", output.rep_index, problem)
        return problems

    def write(self, outputs: list[ReplicationOutput], out_dir: str | Path) -> list[Path]:
        """Write per-replication records, KPIs and census plus the count table.

        Files are written only after every replication has finished, and the
        content depends only on the inputs and the seed.
        """
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        written: list[Path] = []
        run_info: dict[str, object] = {
            "seed": self.seed,
            "n_reps": len(outputs),
            "start_day": self.cfg.dataset_start_day(),
            "period_days": self.cfg.window_days,
            "replications": [],
        }

        for output in outputs:
            r = output.rep_index
            dataset = self.period_dataset(output)
            written.append(write_dataset(dataset, out / f"records_rep{r:02d}.csv"))
            written.append(self._write_kpis(dataset, out / f"kpis_rep{r:02d}.csv"))
            written.append(self._write_census(dataset, out / f"census_rep{r:02d}.csv"))
            if output.trace is not None:
                path = out / f"trace_rep{r:02d}.tsv"
                output.trace.dump(path)
                written.append(path)
            run_info["replications"].append(  # type: ignore[attr-defined]
                {
                    "rep": r,
                    "created": output.created,
                    "in_window": len(output.records),
                    "outcomes": {k.value: v for k, v in sorted(output.outcome_counts.items(), key=lambda i: i[0].value)},
                    "audit_violations": self.audit(output),
                },
            )

        counts = pd.DataFrame(patient_count_rows([o.patient_counts for o in outputs]))
        counts = counts.drop(columns=["real"])
        path = out / "patient_counts.csv"
        counts.to_csv(path, index=False, lineterminator="\n")
        written.append(path)

        path = out / "run.json"
        path.write_text(json.dumps(run_info, indent=2) + "\n")
        written.append(path)
        return written

    @staticmethod
    def _write_kpis(dataset: Dataset, path: Path) -> Path:
        kpis = extract_kpis(dataset.records, mode="simulated")
        rows = [
            {"tag": tag.value, "unit": unit.value, "kpi": kind, "value": f"{value:.4f}"}
            for (tag, unit, kind) in kpis.indices()
            for value in kpis.get(tag, unit, kind)
        ]
        pd.DataFrame(rows, columns=["tag", "unit", "kpi", "value"]).to_csv(path, index=False, lineterminator="\n")
        return path

    @staticmethod
    def _write_census(dataset: Dataset, path: Path) -> Path:
        log = census_log_from_records(dataset.records)
        rows = []
        if dataset.period_hours > 0:
            for cell, census in hourly_census_by_cell(log, (0.0, dataset.period_hours), FEASIBLE_PAIRS).items():
                rows += [
                    {"tag": cell[0].value, "unit": cell[1].value, "hour": h, "census": round(float(c), 6)}
                    for h, c in enumerate(census)
                ]
        pd.DataFrame(rows, columns=["tag", "unit", "hour", "census"]).to_csv(path, index=False, lineterminator="\n")
        return path
