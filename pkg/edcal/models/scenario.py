"""Scenario configuration schema.

A ScenarioConfig holds everything that stays fixed during calibration:
arrival rates, routing probabilities, seat schedules, final-wait
distributions and the run horizon. It is loaded from JSON and validated by
pydantic, so a constructed instance always satisfies its invariants.
"""

import sys

if sys.version_info >= (3, 11):
    from typing import Self
else:
    from typing_extensions import Self

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..distributions import DAYS_PER_WEEK, HOURS_PER_DAY, WeibullParams
from ..tags import FEASIBLE_PAIRS, FEASIBLE_UNITS, VISIT_RESOURCES, TriageTag, UnitId
from ..types import Shift

ALL_DAYS = list(range(DAYS_PER_WEEK))
Probability = float


class WeibullSpec(BaseModel):
    """Weibull parameters as stored in JSON."""

    model_config = ConfigDict(frozen=True)

    shape: float = Field(gt=0, description="Dimensionless shape")
    scale: float = Field(gt=0, description="Scale in hours")

    def to_params(self) -> WeibullParams:
        return WeibullParams(self.shape, self.scale)


class CapacityWindow(BaseModel):
    """Seats available between two hours of the day on selected weekdays.

    A window with start_hour > end_hour wraps past midnight.
    """

    model_config = ConfigDict(frozen=True)

    start_hour: int = Field(ge=0, le=24)
    end_hour: int = Field(ge=0, le=24)
    days: list[int] = Field(default_factory=lambda: list(ALL_DAYS))
    capacity: int = Field(ge=0)

    @field_validator("days")
    @classmethod
    def _days_in_week(cls, v: list[int]) -> list[int]:
        if any(d < 0 or d >= DAYS_PER_WEEK for d in v):
            raise ValueError(f"days must be in 0..6 (Monday=0), got {v}")
        return v

    def hours(self) -> list[int]:
        if self.start_hour <= self.end_hour:
            return list(range(self.start_hour, self.end_hour))
        return list(range(self.start_hour, HOURS_PER_DAY)) + list(range(self.end_hour))


class SeatSchedule(BaseModel):
    """Capacity of one visit resource over the week."""

    model_config = ConfigDict(frozen=True)

    default: int = Field(default=0, ge=0, description="Seats outside every window")
    windows: list[CapacityWindow] = Field(default_factory=list)

    def capacity_grid(self) -> np.ndarray:
        """7x24 integer grid; later windows override earlier ones."""
        grid = np.full((DAYS_PER_WEEK, HOURS_PER_DAY), self.default, dtype=np.int64)
        for window in self.windows:
            for day in window.days:
                for hour in window.hours():
                    grid[day, hour] = window.capacity
        return grid


class ScenarioConfig(BaseModel):
    """Everything fixed during calibration.

    Categorical fields hold non-negative weights; they are normalized when
    sampled, so raw patient counts can be stored directly.
    """

    model_config = ConfigDict(frozen=True)

    rate_table: list[list[float]] = Field(description="7x24 arrivals per hour, [day][hour]")
    start_day: int = Field(default=0, ge=0, le=6, description="Weekday at time 0, Monday=0")
    horizon: float = Field(default=912.0, gt=0, description="Simulated hours")
    warmup: float = Field(default=168.0, ge=0, description="Hours discarded from statistics")

    day_shift_start: int = Field(default=8, ge=0, le=24)
    day_shift_end: int = Field(default=20, ge=0, le=24)
    day_shift_days: list[int] = Field(default_factory=lambda: ALL_DAYS[:6])

    p_deceased: Probability = Field(default=0.0, ge=0, le=1)
    tag_probs_day: dict[TriageTag, float]
    tag_probs_night: dict[TriageTag, float]
    unit_probs: dict[TriageTag, dict[Shift, dict[UnitId, float]]]
    p_lwbs: dict[TriageTag, Probability] = Field(default_factory=dict)
    pre_queue_delay: dict[TriageTag, tuple[float, float]] = Field(default_factory=dict)
    p_removed_after_exams: dict[TriageTag, dict[UnitId, Probability]] = Field(default_factory=dict)
    p_transferred_given_removed: Probability = Field(default=0.0, ge=0, le=1)
    final_wait: dict[TriageTag, dict[UnitId, WeibullSpec]]

    seats: dict[str, SeatSchedule]
    surge_enabled: bool = False
    surge_threshold: float = Field(default=4.0, gt=0)
    surge_extra_seats: int = Field(default=1, ge=0)

    @field_validator("rate_table")
    @classmethod
    def _rate_table_shape(cls, v: list[list[float]]) -> list[list[float]]:
        if len(v) != DAYS_PER_WEEK or any(len(row) != HOURS_PER_DAY for row in v):
            raise ValueError("rate_table must be 7 rows of 24 hourly rates")
        if any(r < 0 or r != r for row in v for r in row):
            raise ValueError("rate_table entries must be non-negative")
        return v

    @model_validator(mode="after")
    def _check_consistency(self) -> Self:
        if self.warmup >= self.horizon:
            raise ValueError(f"warmup ({self.warmup}) must be shorter than horizon ({self.horizon})")
        if self.warmup % HOURS_PER_DAY:
            raise ValueError("warmup must be a whole number of days")

        for name, weights in (("tag_probs_day", self.tag_probs_day), ("tag_probs_night", self.tag_probs_night)):
            _check_weights(name, weights.values())
        if self.tag_probs_night.get(TriageTag.WHITE, 0.0) > 0:
            raise ValueError("white tags cannot be assigned at night")

        for shift, tag_weights in (("day", self.tag_probs_day), ("night", self.tag_probs_night)):
            for tag, weight in tag_weights.items():
                if weight <= 0:
                    continue
                units = self.unit_probs.get(tag, {}).get(shift)
                if not units:
                    raise ValueError(f"unit_probs[{tag.value}][{shift}] missing for a reachable tag")
                _check_weights(f"unit_probs[{tag.value}][{shift}]", units.values())
                for unit, w in units.items():
                    if w > 0 and unit not in FEASIBLE_UNITS[tag]:
                        raise ValueError(f"{tag.value}/{unit.value} is not a feasible assignment")
                    if w > 0 and shift == "night" and unit == UnitId.MIU:
                        raise ValueError("MIU cannot receive patients at night")

        for tag, p in self.p_lwbs.items():
            if not 0 <= p <= 1:
                raise ValueError(f"p_lwbs[{tag.value}] must be a probability")
        for tag, (lo, hi) in self.pre_queue_delay.items():
            if lo < 0 or lo > hi:
                raise ValueError(f"pre_queue_delay[{tag.value}] needs 0 <= lo <= hi")
        for tag, by_unit in self.p_removed_after_exams.items():
            for unit, p in by_unit.items():
                if not 0 <= p <= 1:
                    raise ValueError(f"p_removed_after_exams[{tag.value}][{unit.value}] must be a probability")

        missing = [
            f"{t.value}/{u.value}" for t, u in FEASIBLE_PAIRS if u not in self.final_wait.get(t, {})
        ]
        if missing:
            raise ValueError(f"final_wait missing for feasible pairs: {missing}")

        absent = [name for name in VISIT_RESOURCES if name not in self.seats]
        if absent:
            raise ValueError(f"seat schedules missing for resources: {absent}")
        return self

    def rates(self) -> np.ndarray:
        return np.asarray(self.rate_table, dtype=float)

    def weekday(self, t: float) -> int:
        return int((self.start_day + t // HOURS_PER_DAY) % DAYS_PER_WEEK)

    def shift_at(self, t: float) -> Shift:
        """Routing shift in force at scenario time ``t``."""
        hour = int(t % HOURS_PER_DAY)
        if self.day_shift_start <= hour < self.day_shift_end and self.weekday(t) in self.day_shift_days:
            return "day"
        return "night"

    def tag_weights(self, shift: Shift) -> dict[TriageTag, float]:
        return self.tag_probs_day if shift == "day" else self.tag_probs_night

    def lwbs_probability(self, tag: TriageTag) -> float:
        return self.p_lwbs.get(tag, 0.0)

    def pre_queue_interval(self, tag: TriageTag) -> tuple[float, float]:
        return self.pre_queue_delay.get(tag, (0.0, 0.0))

    def removal_probability(self, tag: TriageTag, unit: UnitId) -> float:
        return self.p_removed_after_exams.get(tag, {}).get(unit, 0.0)

    def final_wait_params(self, tag: TriageTag, unit: UnitId) -> WeibullParams:
        return self.final_wait[tag][unit].to_params()

    @property
    def window(self) -> tuple[float, float]:
        """Statistics window [warmup, horizon) in scenario hours."""
        return self.warmup, self.horizon

    @property
    def window_days(self) -> int:
        return int(round((self.horizon - self.warmup) / HOURS_PER_DAY))

    def dataset_start_day(self) -> int:
        """Weekday at the start of the statistics window."""
        return self.weekday(self.warmup)

    def period_frame(self, rep_index: int = 0) -> tuple[float, float]:
        """(offset, limit) placing replication ``rep_index`` in dataset period time.

        Replications are laid back to back, one statistics window each.
        """
        span = self.horizon - self.warmup
        return rep_index * span - self.warmup, (rep_index + 1) * span


def _check_weights(name: str, weights) -> None:
    values = list(weights)
    if not values or any(w < 0 for w in values) or sum(values) <= 0:
        raise ValueError(f"{name} must hold non-negative weights with a positive sum")


class CalibrationSettings(BaseModel):
    """Knobs of the calibration problem and its solver."""

    model_config = ConfigDict(frozen=True)

    lower_bound: float = Field(default=0.01, gt=0)
    shape_upper: float = Field(default=1000.0, gt=0)
    scale_upper: dict[str, float] = Field(
        default_factory=lambda: {"triage": 0.5, "visit": 4.0, "exams": 40.0},
    )
    delta_shape: float = Field(default=1e-3, gt=0)
    delta_scale: float = Field(default=1e-4, gt=0)
    tol_shared: float = Field(default=0.35, gt=0, description="Yellow/green in MU and SU")
    tol_other: float = Field(default=0.2, gt=0)

    budget: int = Field(default=3000, ge=1)
    n_reps: int = Field(default=30, ge=1)
    eps0: float = Field(default=1.0, gt=0)
    initial_step: int = Field(default=128, ge=1)
    eps_factor: float = Field(default=0.1, gt=0, lt=1)
    feasibility_tol: float = Field(default=1e-6, ge=0)
    f_target: float | None = Field(default=1e-6, description="Stop once feasible with f at or below this")

    request_window: float = Field(default=4.0, gt=0, description="Hours after t2 scanned for exam requests")
    triage_default: WeibullSpec = WeibullSpec(shape=1.0, scale=0.1)
    visit_default: WeibullSpec = WeibullSpec(shape=1.0, scale=0.5)
    exams_default: WeibullSpec = WeibullSpec(shape=1.0, scale=2.0)
