"""Plot-ready comparison tables between real data and simulation output."""

import logging
import re
from collections import Counter
from pathlib import Path

import numpy as np
import pandas as pd

from ..dataio.dataset import Dataset, load_dataset
from ..edmodel.kpis import census_log_from_records, extract_kpis, hourly_census
from ..metrics.constraints import evaluation_index
from ..metrics.ecdf import ecdf, mean_ecdf
from ..metrics.intervals import t_interval
from ..models.kpis import KpiSampleSet
from ..tags import FEASIBLE_PAIRS
from .simulation_service import patient_count_rows

logger = logging.getLogger(__name__)

REPLICATION_FILE = re.compile(r"records_rep(\d+)\.csv$")


def _write(frame: pd.DataFrame, path: Path) -> Path:
    frame.to_csv(path, index=False, lineterminator="\n", float_format="%.6f")
    return path


class ReportService:
    """Compares a real dataset with the per-replication records of a simulation run.

    Simulated records are read back from the files the simulation wrote, so a
    dataset that is itself one of those files compares equal to it.
    """

    def __init__(self, sim_dir: str | Path, dataset: Dataset) -> None:
        self.sim_dir = Path(sim_dir)
        self.dataset = dataset
        self.replications = self._load_replications()

    def _load_replications(self) -> list[Dataset]:
        if not self.sim_dir.is_dir():
            raise FileNotFoundError(f"simulation output directory not found: {self.sim_dir}")
        files = sorted(
            (int(m.group(1)), p) for p in self.sim_dir.iterdir() if (m := REPLICATION_FILE.search(p.name))
        )
        if not files:
            raise FileNotFoundError(f"no records_rep*.csv files in {self.sim_dir}")
        return [load_dataset(p) for _, p in files]

    @property
    def n_reps(self) -> int:
        return len(self.replications)

    def build(self, out_dir: str | Path) -> list[Path]:
        """Write census, ECDF, KPI-mean and patient-count tables into ``out_dir``."""
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        if self.n_reps < 2:
            logger.warning("only %d replication(s): confidence intervals are left empty", self.n_reps)

        written = self.write_census(out)
        written += self.write_ecdfs(out)
        written.append(self.write_kpi_means(out))
        written.append(self.write_patient_counts(out))
        return written

    def write_census(self, out: Path) -> list[Path]:
        real_log = census_log_from_records(self.dataset.records)
        sim_logs = [census_log_from_records(ds.records) for ds in self.replications]
        real_window = (0.0, self.dataset.period_hours or 1.0)
        written = []
        for cell in FEASIBLE_PAIRS:
            real = hourly_census(real_log.get(cell, []), real_window)
            sims = np.array(
                [
                    hourly_census(log.get(cell, []), (0.0, ds.period_hours or 1.0))
                    for log, ds in zip(sim_logs, self.replications, strict=True)
                ],
            )
            rows = []
            for hour in range(real.size):
                mean, lo, hi = t_interval(sims[:, hour])
                rows.append(
                    {
                        "hour": hour,
                        "real": real[hour],
                        "sim_mean": mean,
                        "ci_low": lo,
                        "ci_high": hi,
                        "diff": mean - real[hour],
                    },
                )
            name = f"census_{cell[0].value}_{cell[1].value}.csv"
            written.append(_write(pd.DataFrame(rows), out / name))
        return written

    def _kpis(self) -> tuple[KpiSampleSet, list[KpiSampleSet]]:
        real = extract_kpis(self.dataset.records, mode="real").folded()
        sims = [extract_kpis(ds.records, mode="simulated").folded() for ds in self.replications]
        return real, sims

    def write_ecdfs(self, out: Path) -> list[Path]:
        real, sims = self._kpis()
        written = []
        for tag, unit, kind in evaluation_index():
            real_samples = real.get(tag, unit, kind)
            present = [a for a in (s.get(tag, unit, kind) for s in sims) if a.size]
            if real_samples.size == 0 or not present:
                logger.warning("no %s samples for %s/%s on one side; ECDF table skipped", kind, tag.value, unit.value)
                continue
            real_f = ecdf(real_samples)
            sim_f = mean_ecdf([ecdf(a) for a in present])
            grid = np.union1d(real_f.breakpoints, sim_f.breakpoints)
            frame = pd.DataFrame({"t": grid, "real_F": real_f(grid), "sim_F": sim_f(grid)})
            frame["diff"] = frame["sim_F"] - frame["real_F"]
            written.append(_write(frame, out / f"ecdf_{tag.value}_{unit.value}_{kind}.csv"))
        return written

    def write_kpi_means(self, out: Path) -> Path:
        real, sims = self._kpis()
        rows = []
        for tag, unit, kind in evaluation_index():
            real_samples = real.get(tag, unit, kind)
            rep_means = np.array([a.mean() for a in (s.get(tag, unit, kind) for s in sims) if a.size])
            mean, lo, hi = t_interval(rep_means)
            real_mean = float(real_samples.mean()) if real_samples.size else np.nan
            rows.append(
                {
                    "tag": tag.value,
                    "unit": unit.value,
                    "kpi": kind,
                    "real_mean": real_mean,
                    "sim_mean": mean,
                    "ci_low": lo,
                    "ci_high": hi,
                    "diff": mean - real_mean,
                },
            )
        return _write(pd.DataFrame(rows), out / "kpi_means.csv")

    def write_patient_counts(self, out: Path) -> Path:
        per_rep = [Counter(rec.cell for rec in ds.records if rec.cell is not None) for ds in self.replications]
        real = Counter(rec.cell for rec in self.dataset.records if rec.cell is not None)
        rows = patient_count_rows([dict(c) for c in per_rep], dict(real))
        return _write(pd.DataFrame(rows), out / "patient_counts.csv")
