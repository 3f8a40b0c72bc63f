"""Coordinate lattice search with an exterior penalty.

The incumbent moves along +-e_i by s lattice units. A trial is accepted only
when it strictly lowers the penalized value, and s halves per coordinate on
failure down to one unit. When no unit move improves an infeasible incumbent,
eps shrinks and the search restarts with coarse steps.
"""

import logging
import math
from collections import OrderedDict
from dataclasses import dataclass

import numpy as np

from ..models.params import Bounds, Granularity, ParamVector
from ..models.results import EvaluationResult, HistoryEntry, SolveReport
from ..protocols import Evaluator
from ..types import SolveStatus
from .lattice import from_lattice, lattice_bounds, to_lattice
from .penalty import penalty

logger = logging.getLogger(__name__)

LatticeKey = tuple[int, ...]


@dataclass(frozen=True)
class SolveSettings:
    """Knobs of the search; the defaults match the case-study runs."""

    eps0: float = 1.0
    initial_step: int = 128
    eps_factor: float = 0.1
    feasibility_tol: float = 1e-6
    min_eps: float = 1e-12
    cache_size: int = 100_000
    f_target: float | None = None

    def __post_init__(self) -> None:
        if self.eps0 <= 0 or not 0 < self.eps_factor < 1:
            raise ValueError("need eps0 > 0 and 0 < eps_factor < 1")
        if self.initial_step < 1 or self.cache_size < 1:
            raise ValueError("initial_step and cache_size must be at least 1")


class PointCache:
    """Bounded LRU map from lattice points to evaluation results."""

    def __init__(self, maxsize: int = 100_000) -> None:
        self.maxsize = maxsize
        self._data: OrderedDict[LatticeKey, EvaluationResult] = OrderedDict()

    def get(self, key: LatticeKey) -> EvaluationResult | None:
        result = self._data.get(key)
        if result is not None:
            self._data.move_to_end(key)
        return result

    def put(self, key: LatticeKey, result: EvaluationResult) -> None:
        self._data[key] = result
        self._data.move_to_end(key)
        while len(self._data) > self.maxsize:
            self._data.popitem(last=False)

    def __contains__(self, key: LatticeKey) -> bool:
        return key in self._data

    def __len__(self) -> int:
        return len(self._data)


def penalized_value(result: EvaluationResult, eps: float) -> float:
    """Penalty of an evaluation; failed or non-finite evaluations count as +inf."""
    if result.failed or not math.isfinite(result.f):
        return math.inf
    return penalty(result.f, result.g, result.h, eps)


class LatticeSearch:
    """State of one solve. Use ``solve`` rather than this class directly."""

    def __init__(
        self,
        evaluator: Evaluator,
        start: ParamVector,
        bounds: Bounds,
        granularity: Granularity,
        budget: int,
        seed: int,
        settings: SolveSettings,
    ) -> None:
        if budget < 1:
            raise ValueError(f"budget must be at least 1, got {budget}")
        self.evaluator = evaluator
        self.granularity = granularity
        self.budget = budget
        self.settings = settings
        self.keys = start.keys()
        self.lo, self.hi = lattice_bounds(bounds, granularity, self.keys)
        self.rng = np.random.default_rng(seed)
        self.cache = PointCache(settings.cache_size)
        self.history: list[HistoryEntry] = []
        self.evaluations = 0
        self.eps = settings.eps0

        ints = to_lattice(start, granularity, self.keys)
        clipped = np.clip(ints, self.lo, self.hi)
        if np.any(clipped != ints):
            logger.warning("start point clamped into bounds")
        self.x = clipped

    def point(self, ints: np.ndarray) -> ParamVector:
        return from_lattice(ints, self.granularity, self.keys)

    def evaluate(self, ints: np.ndarray) -> tuple[EvaluationResult, bool]:
        """Result at ``ints`` and whether the evaluator was actually called."""
        key = tuple(int(i) for i in ints)
        cached = self.cache.get(key)
        if cached is not None:
            return cached, False
        try:
            result = self.evaluator(self.point(ints))
        except Exception as e:  # noqa: BLE001
            logger.warning("evaluation %d raised %s: %s; treated as +inf", self.evaluations, type(e).__name__, e)
            result = EvaluationResult.failure(f"{type(e).__name__}: {e}")
        self.evaluations += 1
        self.cache.put(key, result)
        return result, True

    def record(self, result: EvaluationResult, pen: float, accepted: bool) -> None:
        self.history.append(
            HistoryEntry(
                eval_index=self.evaluations - 1,
                f=result.f,
                max_violation=result.max_violation,
                penalized=pen,
                eps=self.eps,
                accepted=accepted,
            ),
        )

    def feasible(self, result: EvaluationResult) -> bool:
        return result.max_violation <= self.settings.feasibility_tol

    def target_reached(self, result: EvaluationResult) -> bool:
        target = self.settings.f_target
        return target is not None and self.feasible(result) and result.f <= target

    def run(self) -> SolveReport:
        best, _ = self.evaluate(self.x)
        best_pen = penalized_value(best, self.eps)
        self.record(best, best_pen, accepted=True)

        n = len(self.keys)
        steps = np.full(n, self.settings.initial_step, dtype=np.int64)
        status: SolveStatus = "budget-exhausted"

        while True:
            if self.target_reached(best):
                status = "target-reached"
                break
            if self.evaluations >= self.budget:
                break

            at_unit = bool(np.all(steps == 1))
            improved = False
            complete = True
            for j in self.rng.permutation(n):
                if self.evaluations >= self.budget:
                    complete = False
                    break
                moved = False
                for sign in (1, -1):
                    trial = self.x.copy()
                    trial[j] = np.clip(self.x[j] + sign * steps[j], self.lo[j], self.hi[j])
                    if trial[j] == self.x[j]:
                        continue
                    if self.evaluations >= self.budget and tuple(int(i) for i in trial) not in self.cache:
                        complete = False
                        break
                    result, fresh = self.evaluate(trial)
                    pen = penalized_value(result, self.eps)
                    accepted = pen < best_pen
                    if fresh:
                        self.record(result, pen, accepted)
                    if accepted:
                        self.x, best, best_pen = trial, result, pen
                        moved = improved = True
                        break
                if not moved:
                    steps[j] = max(1, steps[j] // 2)
                if self.target_reached(best):
                    break

            if improved or not at_unit or not complete:
                continue
            if self.feasible(best):
                status = "converged"
                break
            self.eps *= self.settings.eps_factor
            if self.eps < self.settings.min_eps:
                status = "eps-floor"
                break
            logger.info("incumbent infeasible (violation %.3g); eps reduced to %g", best.max_violation, self.eps)
            best_pen = penalized_value(best, self.eps)
            steps[:] = self.settings.initial_step

        report = SolveReport(
            best_point=self.point(self.x),
            best_f=best.f,
            best_max_violation=best.max_violation,
            best_penalized=best_pen,
            final_eps=self.eps,
            evaluations_used=self.evaluations,
            status=status,
            history=self.history,
            best_result=best,
        )
        logger.info("search finished: %r", report)
        return report


def solve(
    evaluator: Evaluator,
    start: ParamVector,
    bounds: Bounds,
    granularity: Granularity,
    budget: int,
    seed: int = 0,
    settings: SolveSettings | None = None,
) -> SolveReport:
    """Minimize the penalized objective over the lattice inside ``bounds``.

    Args:
    ----
        evaluator: Callable returning an EvaluationResult for a point
        start: Starting point; clamped into bounds and rounded onto the lattice
        bounds: Box bounds per entry
        granularity: Lattice spacing per parameter role
        budget: Maximum number of evaluator calls (cache hits are free)
        seed: Seeds the coordinate visiting order
        settings: Search knobs

    Returns:
    -------
        Best point found together with the evaluation history

    """
    search = LatticeSearch(evaluator, start, bounds, granularity, budget, seed, settings or SolveSettings())
    return search.run()


def improving_neighbors(
    evaluator: Evaluator,
    report: SolveReport,
    bounds: Bounds,
    granularity: Granularity,
) -> list[str]:
    """Labels of unit lattice moves from the best point that lower the penalized value.

    An empty list certifies lattice stationarity at the final eps.
    """
    keys = report.best_point.keys()
    lo, hi = lattice_bounds(bounds, granularity, keys)
    x = to_lattice(report.best_point, granularity, keys)
    better = []
    for j, key in enumerate(keys):
        for sign in (1, -1):
            trial = x.copy()
            trial[j] += sign
            if not lo[j] <= trial[j] <= hi[j]:
                continue
            pen = penalized_value(evaluator(from_lattice(trial, granularity, keys)), report.final_eps)
            if pen < report.best_penalized:
                better.append(f"{key.label}{'+' if sign > 0 else '-'}")
    return better
