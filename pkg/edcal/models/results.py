"""Outputs of replications, evaluations and solves."""

import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np

from ..tags import TriageTag, UnitId
from ..types import HistoryRow, SolveStatus, TimeDiff
from .kpis import KpiSampleSet
from .params import ParamVector
from .patient import Outcome, PatientRecord

if TYPE_CHECKING:
    from ..simcore.trace import EventTrace

CensusLog = dict[tuple[TriageTag, UnitId], list[tuple[float, int]]]


@dataclass
class ReplicationOutput:
    """Everything one replication contributes to statistics.

    Only patients whose triage starts inside the statistics window appear in
    kpis, patient_counts, census_log and records. ``outcome_counts`` covers
    every created entity and backs the conservation audit.
    """

    rep_index: int
    kpis: KpiSampleSet = field(default_factory=KpiSampleSet)
    patient_counts: dict[tuple[TriageTag, UnitId], int] = field(default_factory=dict)
    census_log: CensusLog = field(default_factory=dict)
    records: list[PatientRecord] = field(default_factory=list)
    outcome_counts: dict[Outcome, int] = field(default_factory=dict)
    created: int = 0
    trace: "EventTrace | None" = field(default=None, compare=False)

    def is_empty(self) -> bool:
        return not self.records and self.kpis.is_empty()

    def __repr__(self) -> str:
        return f"ReplicationOutput(rep={self.rep_index}, created={self.created}, records={len(self.records)})"


@dataclass
class CellDiagnostics:
    """Per-index statistics of one evaluation."""

    tag: TriageTag
    unit: UnitId
    kind: TimeDiff
    mu_sim: float
    mu_real: float
    sd_sim: float
    sd_real: float
    count_sim: float
    count_real: int
    integral: float
    g: float
    h: float
    dropped: bool = False


@dataclass
class EvaluationResult:
    """Objective value and stacked constraints at one point.

    A failed evaluation (some cell empty in every replication) has f = inf and
    is treated as infeasible by the optimizer.
    """

    f: float
    g: np.ndarray = field(default_factory=lambda: np.zeros(0))
    h: np.ndarray = field(default_factory=lambda: np.zeros(0))
    failed: bool = False
    labels: list[str] = field(default_factory=list)
    diagnostics: list[CellDiagnostics] = field(default_factory=list)
    failed_cells: list[str] = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def max_g(self) -> float:
        return float(np.max(self.g)) if self.g.size else -math.inf

    @property
    def max_h(self) -> float:
        return float(np.max(self.h)) if self.h.size else -math.inf

    @property
    def max_violation(self) -> float:
        """Largest positive constraint value (0 when feasible, inf when failed)."""
        if self.failed:
            return math.inf
        return max(0.0, self.max_g, self.max_h)

    @classmethod
    def failure(cls, reason: str = "") -> "EvaluationResult":
        return cls(f=math.inf, failed=True, failed_cells=[reason] if reason else [])

    def __repr__(self) -> str:
        state = "failed" if self.failed else f"f={self.f:.6g}, viol={self.max_violation:.3g}"
        return f"EvaluationResult({state})"


@dataclass
class HistoryEntry:
    """One evaluator call made by the solver."""

    eval_index: int
    f: float
    max_violation: float
    penalized: float
    eps: float
    accepted: bool

    def as_row(self) -> HistoryRow:
        return {
            "eval_index": self.eval_index,
            "f": self.f,
            "max_violation": self.max_violation,
            "penalized": self.penalized,
            "eps": self.eps,
            "accepted": self.accepted,
        }


@dataclass
class SolveReport:
    """Result of a lattice search."""

    best_point: ParamVector
    best_f: float
    best_max_violation: float
    best_penalized: float
    final_eps: float
    evaluations_used: int
    status: SolveStatus
    history: list[HistoryEntry] = field(default_factory=list)
    best_result: EvaluationResult | None = None

    def feasible(self, tol: float = 1e-6) -> bool:
        return self.best_max_violation <= tol

    def summary(self) -> dict[str, object]:
        return {
            "status": self.status,
            "best_f": self.best_f,
            "best_max_violation": self.best_max_violation,
            "best_penalized": self.best_penalized,
            "final_eps": self.final_eps,
            "evaluations_used": self.evaluations_used,
            "feasible": self.feasible(),
            "best_point": self.best_point.to_dict(),
        }

    def __repr__(self) -> str:
        return (
            f"SolveReport({self.status}, f={self.best_f:.6g}, "
            f"viol={self.best_max_violation:.3g}, evals={self.evaluations_used})"
        )
