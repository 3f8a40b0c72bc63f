"""Type definitions for configuration rows and string-valued domains."""

import sys
from typing import Literal, TypedDict

if sys.version_info >= (3, 11):
    from typing import NotRequired
else:
    from typing_extensions import NotRequired

Shift = Literal["day", "night"]
"""Shift used for tag and unit routing."""

TimeDiff = Literal["DOT", "DIT"]
"""Time differences compared during calibration (door-to-doctor, doctor-to-discharge)."""

TIME_DIFFS: tuple[TimeDiff, ...] = ("DOT", "DIT")

KpiMode = Literal["real", "simulated"]
"""How DIT is measured: real data prefers t5, simulated data always uses t6."""

TraceKind = Literal["ENQUEUE", "GRANT", "RELEASE", "CAPACITY"]
"""Kinds of events recorded in the kernel trace."""

SolveStatus = Literal["converged", "target-reached", "budget-exhausted", "eps-floor"]
"""Why the lattice search stopped."""


class DatasetRow(TypedDict):
    """One row of the dataset CSV (all fields as written)."""

    id: str
    tag: str
    unit: str
    t0: str
    t2: str
    t5: str
    t6: str
    outcome: str


class AnnotationRow(TypedDict):
    """One exam-request row as written."""

    id: str
    request_time: str


class EvaluationRow(TypedDict):
    """Diagnostics emitted per evaluation."""

    eval_index: int
    f: float
    max_g: float
    max_h: float
    wall_time: float


class HistoryRow(TypedDict):
    """One solve history entry."""

    eval_index: int
    f: float
    max_violation: float
    penalized: float
    eps: float
    accepted: bool


class PatientCountRow(TypedDict):
    """Per-cell patient counts with a confidence interval."""

    tag: str
    unit: str
    sim_mean: float
    ci_low: float | None
    ci_high: float | None
    real: NotRequired[int | None]
