"""Method-of-moments Weibull fits and the calibration starting point."""

import logging
import math
from collections import defaultdict
from collections.abc import Sequence

import numpy as np
from scipy.optimize import bisect
from scipy.special import gamma, gammaln

from ..distributions import WeibullParams, weibull_mean_std
from ..errors import DegenerateSampleError
from ..models.params import Granularity, ParamVector, clamp_to_problem, snap
from ..models.patient import Outcome
from ..models.scenario import CalibrationSettings, ScenarioConfig
from ..tags import DECISION_PAIRS, TRIAGE_PAIRS, Activity, Cell, pair_label, parameter_pair
from .config import problem_from_settings
from .dataset import Dataset, ExamRequestAnnotation

logger = logging.getLogger(__name__)

SHAPE_BRACKET = (0.05, 1000.0)


def _log_moment_ratio(alpha: float) -> float:
    """ln(Gamma(1 + 2/a) / Gamma(1 + 1/a)^2), decreasing in a."""
    return float(gammaln(1.0 + 2.0 / alpha) - 2.0 * gammaln(1.0 + 1.0 / alpha))


def _solve_shape(cv: float) -> float:
    target = math.log1p(cv * cv)
    lo, hi = SHAPE_BRACKET
    if target >= _log_moment_ratio(lo):
        return lo
    if target <= _log_moment_ratio(hi):
        return hi
    return float(bisect(lambda a: _log_moment_ratio(a) - target, lo, hi, xtol=1e-10, maxiter=200))


def fit_weibull(
    durations: Sequence[float] | np.ndarray,
    shape_bounds: tuple[float, float] = (0.01, 1000.0),
    scale_bounds: tuple[float, float] | None = None,
    granularity: Granularity | None = None,
) -> WeibullParams:
    """Weibull parameters matching the sample mean and coefficient of variation.

    The shape solves Gamma(1+2/a) / Gamma(1+1/a)^2 = 1 + (s/m)^2 by bisection
    on [0.05, 1000]; the scale is m / Gamma(1+1/a). Both are clamped to their
    bounds and rounded to the lattice.

    Raises
    ------
        DegenerateSampleError: fewer than two distinct values

    """
    granularity = granularity or Granularity()
    data = np.asarray(durations, dtype=float)
    data = data[np.isfinite(data)]
    if np.unique(data).size < 2:
        raise DegenerateSampleError(f"need at least two distinct durations, got {np.unique(data).size}")
    if np.any(data <= 0):
        raise DegenerateSampleError("durations must be positive")

    mean = float(data.mean())
    cv = float(data.std(ddof=1)) / mean
    shape = snap(min(max(_solve_shape(cv), shape_bounds[0]), shape_bounds[1]), granularity.delta_shape)
    scale = mean / float(gamma(1.0 + 1.0 / shape))
    if scale_bounds is not None:
        scale = min(max(scale, scale_bounds[0]), scale_bounds[1])
    scale = max(snap(scale, granularity.delta_scale), granularity.delta_scale)
    return WeibullParams(shape, scale)


def latest_requests(
    ds: Dataset,
    annotations: Sequence[ExamRequestAnnotation],
    window: float,
) -> dict[int, float]:
    """Latest exam request within [t2, t2 + window] per patient id."""
    records = ds.by_id()
    latest: dict[int, float] = {}
    for ann in annotations:
        rec = records.get(ann.patient_id)
        if rec is None or rec.t2 is None:
            continue
        inside = [t for t in ann.request_times if rec.t2 <= t <= rec.t2 + window]
        if inside:
            latest[ann.patient_id] = max(inside)
    return latest


def initial_guess(
    ds: Dataset,
    annotations: Sequence[ExamRequestAnnotation],
    cfg: ScenarioConfig,
    settings: CalibrationSettings | None = None,
) -> ParamVector:
    """Starting point of the calibration.

    Triage entries come from the configured defaults. Visit entries are fitted
    to the gap between t2 and the latest exam request inside the request
    window. Exams entries are fitted to t6 minus the presumed visit end minus
    the mean final wait, for discharged patients. A cell without enough data
    falls back to the configured default with one warning.
    """
    settings = settings or CalibrationSettings()
    _, bounds, granularity = problem_from_settings(settings)
    shape_bounds = (settings.lower_bound, settings.shape_upper)

    def fit(activity: Activity, cell: Cell, samples: list[float], default: WeibullParams) -> WeibullParams:
        scale_bounds = (settings.lower_bound, settings.scale_upper[activity.value])
        try:
            return fit_weibull(samples, shape_bounds, scale_bounds, granularity)
        except DegenerateSampleError as e:
            logger.warning(
                "%s %s: %s; using default %r", activity.value, pair_label(*cell), e, default,
            )
            return default

    params = ParamVector()
    triage_default = settings.triage_default.to_params()
    for tag, unit in TRIAGE_PAIRS:
        params = params.with_weibull(Activity.TRIAGE, tag, unit, triage_default)

    latest = latest_requests(ds, annotations, settings.request_window)
    visit_samples: dict[Cell, list[float]] = defaultdict(list)
    for rec in ds.records:
        if rec.cell is None or rec.t2 is None or rec.id not in latest:
            continue
        gap = latest[rec.id] - rec.t2
        if gap > 0:
            visit_samples[parameter_pair(*rec.cell)].append(gap)

    visit_default = settings.visit_default.to_params()
    visit_fits: dict[Cell, WeibullParams] = {}
    for cell in DECISION_PAIRS:
        visit_fits[cell] = fit(Activity.VISIT, cell, visit_samples[cell], visit_default)
        params = params.with_weibull(Activity.VISIT, *cell, visit_fits[cell])

    exams_samples: dict[Cell, list[float]] = defaultdict(list)
    for rec in ds.records:
        if rec.cell is None or rec.t2 is None or rec.t6 is None or rec.outcome != Outcome.DISCHARGED:
            continue
        cell = parameter_pair(*rec.cell)
        visit_end = latest.get(rec.id, rec.t2 + weibull_mean_std(visit_fits[cell])[0])
        final_wait_mean, _ = weibull_mean_std(cfg.final_wait_params(*rec.cell))
        remaining = rec.t6 - visit_end - final_wait_mean
        if remaining > 0:
            exams_samples[cell].append(remaining)

    exams_default = settings.exams_default.to_params()
    for cell in DECISION_PAIRS:
        params = params.with_weibull(Activity.EXAMS, *cell, fit(Activity.EXAMS, cell, exams_samples[cell], exams_default))

    return clamp_to_problem(params, bounds, granularity)
