"""KPI extraction and hourly census."""

import logging
import math
from collections.abc import Iterable, Sequence

import numpy as np

from ..distributions import HOURS_PER_DAY
from ..errors import DataValidationError
from ..models.kpis import KpiSampleSet
from ..models.patient import TIME_DECIMALS, Outcome, PatientRecord
from ..models.results import CensusLog
from ..tags import Cell
from ..types import KpiMode

logger = logging.getLogger(__name__)


def extract_kpis(records: Iterable[PatientRecord], mode: KpiMode = "real") -> KpiSampleSet:
    """Collect DOT and DIT samples per (tag, unit).

    DOT = t2 - t0 for every record with both. DIT is collected for discharged
    records only: t5 - t2 when t5 is present in real data, t6 - t2 otherwise.
    Simulated data always uses t6 - t2.

    Raises
    ------
        DataValidationError: if a record has t2 < t0

    """
    kpis = KpiSampleSet()
    for rec in records:
        if rec.tag is None or rec.unit is None or rec.t0 is None or rec.t2 is None:
            continue
        if rec.t2 < rec.t0:
            raise DataValidationError("t2 precedes t0", offending_ids=[rec.id])
        kpis.add(rec.tag, rec.unit, "DOT", rec.t2 - rec.t0)
        if rec.outcome != Outcome.DISCHARGED:
            continue
        end = rec.t5 if (mode == "real" and rec.t5 is not None) else rec.t6
        if end is None:
            continue
        if end < rec.t2:
            raise DataValidationError("discharge precedes visit start", offending_ids=[rec.id])
        kpis.add(rec.tag, rec.unit, "DIT", end - rec.t2)
    return kpis


def segmented_kpis(
    records: Sequence[PatientRecord],
    n_segments: int,
    segment_hours: float,
    mode: KpiMode = "real",
) -> KpiSampleSet:
    """Pooled KPIs plus one sample set per back-to-back period of ``segment_hours``.

    A record belongs to the segment holding its t0; anything past the last
    segment is kept in the last one.
    """
    if n_segments < 2:
        return extract_kpis(records, mode)
    buckets: list[list[PatientRecord]] = [[] for _ in range(n_segments)]
    for rec in records:
        if rec.t0 is not None:
            buckets[min(max(int(rec.t0 // segment_hours), 0), n_segments - 1)].append(rec)
    pooled = extract_kpis(records, mode)
    pooled.segments = [extract_kpis(bucket, mode) for bucket in buckets]
    return pooled


def to_period_records(records: Iterable[PatientRecord], offset: float, limit: float) -> list[PatientRecord]:
    """Shift scenario-time records into period time with dataset precision.

    Records are ordered by triage start. A record whose rounded t0 reaches
    ``limit`` is dropped so the result stays inside the period.
    """
    moved = []
    for rec in sorted(records, key=lambda r: (r.t0 if r.t0 is not None else 0.0, r.id)):
        shifted = rec.shifted(offset, decimals=TIME_DECIMALS)
        if shifted.t0 is None or shifted.t0 >= limit:
            continue
        moved.append(shifted)
    return moved


def census_log_from_records(records: Iterable[PatientRecord]) -> CensusLog:
    """In-treatment population changes: +1 at visit start, -1 when leaving the ED."""
    log: CensusLog = {}
    for rec in records:
        if rec.cell is None or rec.t2 is None:
            continue
        entries = log.setdefault(rec.cell, [])
        entries.append((rec.t2, 1))
        if rec.t6 is not None:
            entries.append((rec.t6, -1))
    for entries in log.values():
        entries.sort(key=lambda e: (e[0], -e[1]))
    return log


def hourly_census(census_log: Sequence[tuple[float, int]], window: tuple[float, float]) -> np.ndarray:
    """Time-averaged census per hour of day over ``window``.

    For hour h the result is the integral of the census over all parts of the
    window whose hour of day is h, divided by the length of those parts.

    Raises
    ------
        ValueError: if the window is empty

    """
    start, end = window
    if not end > start:
        raise ValueError(f"empty census window [{start}, {end})")
    result = np.zeros(HOURS_PER_DAY)
    if not census_log:
        return result

    entries = sorted(census_log, key=lambda e: (e[0], -e[1]))
    times = np.array([e[0] for e in entries], dtype=float)
    levels = np.cumsum([e[1] for e in entries])

    hour_marks = np.arange(math.ceil(start), math.floor(end) + 1, dtype=float)
    inner_events = times[(times > start) & (times < end)]
    grid = np.unique(np.concatenate(([start, end], hour_marks[(hour_marks > start) & (hour_marks < end)], inner_events)))
    seg_start = grid[:-1]
    widths = np.diff(grid)

    idx = np.searchsorted(times, seg_start, side="right") - 1
    seg_level = np.where(idx >= 0, levels[np.clip(idx, 0, None)], 0)
    hour_of_seg = np.floor(seg_start).astype(np.int64) % HOURS_PER_DAY

    weighted = np.bincount(hour_of_seg, weights=seg_level * widths, minlength=HOURS_PER_DAY)
    exposure = np.bincount(hour_of_seg, weights=widths, minlength=HOURS_PER_DAY)
    np.divide(weighted, exposure, out=result, where=exposure > 0)
    return result


def hourly_census_by_cell(
    census_log: CensusLog,
    window: tuple[float, float],
    cells: Iterable[Cell] | None = None,
) -> dict[Cell, np.ndarray]:
    """hourly_census per (tag, unit); listed cells missing from the log get zeros."""
    wanted = list(census_log) if cells is None else list(cells)
    return {cell: hourly_census(census_log.get(cell, []), window) for cell in wanted}
