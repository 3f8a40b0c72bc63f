"""Relative accuracy constraints on means and standard deviations."""

from dataclasses import dataclass, field

from ..errors import DegenerateReferenceError
from ..models.kpis import KpiIndex
from ..tags import DECISION_PAIRS, TriageTag, UnitId
from ..types import TIME_DIFFS

_SHARED_TAGS = (TriageTag.YELLOW, TriageTag.GREEN)
_SHARED_UNITS = (UnitId.MU, UnitId.SU)


def _relative_gap(sim: float, real: float, tol: float, what: str) -> float:
    if tol <= 0:
        raise ValueError(f"tolerance must be positive, got {tol}")
    if real == 0:
        raise DegenerateReferenceError(f"real {what} is zero")
    return abs((sim - real) / real) - tol


def constraint_g(mu_sim: float, mu_real: float, tol: float) -> float:
    """|(mu_sim - mu_real) / mu_real| - tol; feasible iff <= 0."""
    return _relative_gap(mu_sim, mu_real, tol, "mean")


def constraint_h(sd_sim: float, sd_real: float, tol: float) -> float:
    """|(sd_sim - sd_real) / sd_real| - tol; feasible iff <= 0."""
    return _relative_gap(sd_sim, sd_real, tol, "standard deviation")


def evaluation_index() -> list[KpiIndex]:
    """(tag, unit, time difference) triples compared during calibration."""
    return [(tag, unit, kind) for tag, unit in DECISION_PAIRS for kind in TIME_DIFFS]


@dataclass
class Tolerances:
    """Accuracy thresholds per index for the mean and std constraints."""

    tol_mu: dict[KpiIndex, float] = field(default_factory=dict)
    tol_sigma: dict[KpiIndex, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if any(v <= 0 for v in (*self.tol_mu.values(), *self.tol_sigma.values())):
            raise ValueError("tolerances must be positive")

    @classmethod
    def default(cls, shared: float = 0.35, other: float = 0.2) -> "Tolerances":
        """Looser tolerance for yellow/green patients in MU and SU."""
        tol = {
            idx: shared if (idx[0] in _SHARED_TAGS and idx[1] in _SHARED_UNITS) else other
            for idx in evaluation_index()
        }
        return cls(dict(tol), dict(tol))
