"""Patient timestamps shared by real and simulated data."""

from dataclasses import dataclass
from enum import Enum

from ..tags import TriageTag, UnitId

# Decimal places of an hour kept by dataset timestamps.
TIME_DECIMALS = 4


class Outcome(str, Enum):
    """How a patient left (or did not leave) the ED."""

    DISCHARGED = "discharged"
    LWBS = "lwbs"
    DECEASED = "deceased"
    LEFT_DURING_EXAMS = "left-during-exams"
    TRANSFERRED = "transferred"
    IN_SYSTEM = "in-system-at-horizon"


@dataclass
class PatientRecord:
    """One patient's timestamps in hours.

    t0 is the start of triage, t2 the start of the visit, t5 the last report
    (real data only) and t6 the time the patient leaves the ED. ``arrival``,
    ``t3`` (visit end) and ``exams_end`` are simulation internals and are never
    written to a dataset.
    """

    id: int
    tag: TriageTag | None = None
    unit: UnitId | None = None
    t0: float | None = None
    t2: float | None = None
    t5: float | None = None
    t6: float | None = None
    outcome: Outcome = Outcome.IN_SYSTEM
    arrival: float | None = None
    t3: float | None = None
    exams_end: float | None = None

    @property
    def cell(self) -> tuple[TriageTag, UnitId] | None:
        if self.tag is None or self.unit is None:
            return None
        return self.tag, self.unit

    def shifted(self, offset: float, decimals: int | None = None) -> "PatientRecord":
        """Copy with every timestamp moved by ``offset`` hours (optionally rounded)."""

        def move(t: float | None) -> float | None:
            if t is None:
                return None
            moved = t + offset
            return round(moved, decimals) if decimals is not None else moved

        return PatientRecord(
            id=self.id,
            tag=self.tag,
            unit=self.unit,
            t0=move(self.t0),
            t2=move(self.t2),
            t5=move(self.t5),
            t6=move(self.t6),
            outcome=self.outcome,
            arrival=move(self.arrival),
            t3=move(self.t3),
            exams_end=move(self.exams_end),
        )

    def public(self) -> "PatientRecord":
        """Copy without the simulation-only fields."""
        return PatientRecord(
            id=self.id,
            tag=self.tag,
            unit=self.unit,
            t0=self.t0,
            t2=self.t2,
            t5=self.t5,
            t6=self.t6,
            outcome=self.outcome,
        )

    def __repr__(self) -> str:
        cell = f"{self.tag.value}/{self.unit.value}" if self.tag and self.unit else "-"
        return f"PatientRecord({self.id} {cell} {self.outcome.value})"
