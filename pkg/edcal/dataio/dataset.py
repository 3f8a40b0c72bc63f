"""Dataset and annotation CSV files.

Dataset schema: ``id,tag,unit,t0,t2,t5,t6,outcome`` with times in decimal
hours from the start of the period, four decimals, empty for missing values.
An optional ``<stem>.meta.json`` sidecar stores the period metadata.
"""

import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path

import pandas as pd

from ..distributions import HOURS_PER_DAY
from ..edmodel.kpis import segmented_kpis
from ..errors import DataValidationError
from ..models.kpis import KpiSampleSet
from ..models.patient import TIME_DECIMALS, Outcome, PatientRecord
from ..tags import TriageTag, UnitId, is_feasible
from ..types import AnnotationRow, DatasetRow

logger = logging.getLogger(__name__)

DATASET_COLUMNS = ["id", "tag", "unit", "t0", "t2", "t5", "t6", "outcome"]
ANNOTATION_COLUMNS = ["id", "request_time"]
TIME_COLUMNS = ("t0", "t2", "t5", "t6")
DATASET_UNITS = (UnitId.MU, UnitId.SU, UnitId.RA, UnitId.MIU)


@dataclass
class Dataset:
    """Patient records of one observation period."""

    records: list[PatientRecord] = field(default_factory=list)
    start_day: int = 0
    period_days: int = 0

    @property
    def period_hours(self) -> float:
        return float(self.period_days * HOURS_PER_DAY)

    def by_id(self) -> dict[int, PatientRecord]:
        return {rec.id: rec for rec in self.records}

    def kpis(self, window_days: int | None = None) -> KpiSampleSet:
        """Real-data KPIs, split into statistics windows when the period spans several.

        A period that is a whole multiple (two or more) of ``window_days``,
        such as a synthetic file of several replications, gets one segment per
        window so it is compared window by window with the simulation.
        """
        n_segments = 1
        if window_days and self.period_days > window_days and self.period_days % window_days == 0:
            n_segments = self.period_days // window_days
        return segmented_kpis(self.records, n_segments, float((window_days or 0) * HOURS_PER_DAY), mode="real")

    def __len__(self) -> int:
        return len(self.records)

    def __repr__(self) -> str:
        return f"Dataset({len(self.records)} records, start_day={self.start_day}, days={self.period_days})"


@dataclass
class ExamRequestAnnotation:
    """Times at which the physician asked for exams for one patient."""

    patient_id: int
    request_times: list[float] = field(default_factory=list)


def meta_path(path: Path) -> Path:
    return path.with_name(f"{path.stem}.meta.json")


def _read_csv(path: Path, columns: list[str]) -> pd.DataFrame:
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False)
    except pd.errors.EmptyDataError:
        raise DataValidationError("file is empty, expected a header", line=1) from None
    except pd.errors.ParserError as e:
        raise DataValidationError(f"malformed CSV: {e}") from e
    if list(frame.columns) != columns:
        raise DataValidationError(f"header must be {','.join(columns)}, got {','.join(frame.columns)}", line=1)
    return frame


def _parse_time(text: str, column: str, line: int) -> float | None:
    if text == "":
        return None
    try:
        value = float(text)
    except ValueError:
        raise DataValidationError(f"{column} is not a number: {text!r}", line=line) from None
    if not math.isfinite(value):
        raise DataValidationError(f"{column} is not finite: {text!r}", line=line)
    return value


def _parse_row(row: dict[str, str], line: int) -> PatientRecord:
    try:
        patient_id = int(row["id"])
        tag = TriageTag(row["tag"])
        unit = UnitId(row["unit"])
        outcome = Outcome(row["outcome"])
    except ValueError as e:
        raise DataValidationError(str(e), line=line) from None
    if unit not in DATASET_UNITS:
        raise DataValidationError(f"unit {unit.value} cannot appear in a dataset", line=line)
    times = {col: _parse_time(row[col], col, line) for col in TIME_COLUMNS}
    if times["t0"] is None:
        raise DataValidationError("t0 is required", line=line)
    return PatientRecord(id=patient_id, tag=tag, unit=unit, outcome=outcome, **times)


def _is_monotone(rec: PatientRecord) -> bool:
    present = [t for t in (rec.t0, rec.t2, rec.t5, rec.t6) if t is not None]
    return all(a <= b for a, b in zip(present, present[1:], strict=False))


def _read_meta(path: Path) -> dict[str, int] | None:
    sidecar = meta_path(path)
    if not sidecar.exists():
        return None
    try:
        meta = json.loads(sidecar.read_text())
        return {"start_day": int(meta["start_day"]), "period_days": int(meta["period_days"])}
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as e:
        raise DataValidationError(f"malformed metadata in {sidecar.name}: {e}") from e


def validate_records(records: list[PatientRecord], period_hours: float | None = None) -> None:
    """Check timestamp order, (tag, unit) feasibility and the period.

    Raises
    ------
        DataValidationError: listing every offending id

    """
    seen: set[int] = set()
    duplicates = []
    for rec in records:
        if rec.id in seen:
            duplicates.append(rec.id)
        seen.add(rec.id)
    if duplicates:
        raise DataValidationError("duplicate patient ids", offending_ids=duplicates)

    unordered = [rec.id for rec in records if not _is_monotone(rec)]
    if unordered:
        raise DataValidationError("timestamps must satisfy t0 <= t2 <= t5 <= t6", offending_ids=unordered)

    infeasible = [rec.id for rec in records if rec.cell is None or not is_feasible(*rec.cell)]
    if infeasible:
        raise DataValidationError("infeasible (tag, unit) pair", offending_ids=infeasible)

    if period_hours is not None:
        outside = [rec.id for rec in records if rec.t0 is not None and not 0 <= rec.t0 < period_hours]
        if outside:
            raise DataValidationError(f"t0 outside the period [0, {period_hours:g})", offending_ids=outside)


def load_dataset(path: str | Path) -> Dataset:
    """Parse and validate a dataset CSV.

    Args:
    ----
        path: CSV file; its ``.meta.json`` sidecar is read when present

    Returns:
    -------
        The validated Dataset

    Raises:
    ------
        DataValidationError: malformed row (with line number) or invalid records
        FileNotFoundError: if the file does not exist

    """
    path = Path(path)
    frame = _read_csv(path, DATASET_COLUMNS)
    records = [_parse_row(row, i + 2) for i, row in enumerate(frame.to_dict("records"))]

    meta = _read_meta(path)
    if meta is None:
        last = max(
            (t for rec in records for t in (rec.t0, rec.t2, rec.t5, rec.t6) if t is not None),
            default=0.0,
        )
        meta = {"start_day": 0, "period_days": math.ceil(last / HOURS_PER_DAY)}
        validate_records(records)
    else:
        validate_records(records, meta["period_days"] * HOURS_PER_DAY)

    dataset = Dataset(records, **meta)
    logger.debug("loaded %r from %s", dataset, path)
    return dataset


def _format_time(t: float | None) -> str:
    return "" if t is None else f"{t:.{TIME_DECIMALS}f}"


def write_dataset(ds: Dataset, path: str | Path) -> Path:
    """Write ``ds`` in the dataset schema plus its metadata sidecar."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    rows: list[DatasetRow] = [
        {
            "id": str(rec.id),
            "tag": rec.tag.value if rec.tag else "",
            "unit": rec.unit.value if rec.unit else "",
            "t0": _format_time(rec.t0),
            "t2": _format_time(rec.t2),
            "t5": _format_time(rec.t5),
            "t6": _format_time(rec.t6),
            "outcome": rec.outcome.value,
        }
        for rec in ds.records
    ]
    pd.DataFrame(rows, columns=DATASET_COLUMNS).to_csv(path, index=False, lineterminator="\n")
    meta_path(path).write_text(json.dumps({"start_day": ds.start_day, "period_days": ds.period_days}, indent=2) + "\n")
    return path


def load_annotations(path: str | Path, dataset: Dataset | None = None) -> list[ExamRequestAnnotation]:
    """Read ``id,request_time`` rows grouped per patient, in first-seen order.

    With a dataset, every request must belong to a known patient and come no
    earlier than that patient's t2.
    """
    frame = _read_csv(Path(path), ANNOTATION_COLUMNS)
    grouped: dict[int, ExamRequestAnnotation] = {}
    for i, row in enumerate(frame.to_dict("records")):
        line = i + 2
        try:
            patient_id = int(row["id"])
        except ValueError:
            raise DataValidationError(f"id is not an integer: {row['id']!r}", line=line) from None
        when = _parse_time(row["request_time"], "request_time", line)
        if when is None:
            raise DataValidationError("request_time is required", line=line)
        grouped.setdefault(patient_id, ExamRequestAnnotation(patient_id)).request_times.append(when)

    annotations = list(grouped.values())
    if dataset is not None:
        validate_annotations(annotations, dataset)
    return annotations


def validate_annotations(annotations: list[ExamRequestAnnotation], dataset: Dataset) -> None:
    records = dataset.by_id()
    unknown = [a.patient_id for a in annotations if a.patient_id not in records]
    if unknown:
        raise DataValidationError("annotations for unknown patients", offending_ids=unknown)
    early = [
        a.patient_id
        for a in annotations
        if records[a.patient_id].t2 is None or any(t < records[a.patient_id].t2 for t in a.request_times)
    ]
    if early:
        raise DataValidationError("exam request before the visit start", offending_ids=early)


def write_annotations(annotations: list[ExamRequestAnnotation], path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    rows: list[AnnotationRow] = [
        {"id": str(a.patient_id), "request_time": _format_time(t)} for a in annotations for t in a.request_times
    ]
    pd.DataFrame(rows, columns=ANNOTATION_COLUMNS).to_csv(path, index=False, lineterminator="\n")
    return path
