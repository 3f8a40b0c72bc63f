"""Seeded random-variate generation.

All samplers use inverse-transform sampling with one uniform draw per variate,
so a fixed uniform sequence maps to a fixed variate sequence. Times are in hours.
"""

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.special import gamma

from .errors import ParameterDomainError

logger = logging.getLogger(__name__)

HOURS_PER_DAY = 24
DAYS_PER_WEEK = 7


@dataclass(frozen=True)
class WeibullParams:
    """Weibull shape (dimensionless) and scale (hours)."""

    shape: float
    scale: float

    def __post_init__(self) -> None:
        if not (self.shape > 0 and self.scale > 0) or not (
            math.isfinite(self.shape) and math.isfinite(self.scale)
        ):
            raise ParameterDomainError(
                f"Weibull parameters must be positive and finite, got ({self.shape}, {self.scale})",
            )

    def __repr__(self) -> str:
        return f"Weib({self.shape:g}, {self.scale:g})"


class RngStream:
    """An addressable random stream.

    A stream is identified by a base seed plus a tuple key. Streams with the
    same (seed, key) produce identical draw sequences; streams with different
    keys are statistically independent (numpy SeedSequence spawn keys).

    Args:
    ----
        seed: Non-negative 64-bit base seed
        stream_id: Key addressing a substream, e.g. (replication, purpose)

    """

    def __init__(self, seed: int, stream_id: Sequence[int] = ()) -> None:
        if seed < 0 or any(k < 0 for k in stream_id):
            raise ParameterDomainError("seed and stream ids must be non-negative")
        self.seed = int(seed)
        self.stream_id = tuple(int(k) for k in stream_id)
        sequence = np.random.SeedSequence(self.seed, spawn_key=self.stream_id)
        self.generator = np.random.Generator(np.random.PCG64(sequence))

    def spawn(self, *key: int) -> "RngStream":
        """Derive an independent child stream addressed by ``key``."""
        return RngStream(self.seed, (*self.stream_id, *key))

    def uniform(self, size: int | tuple[int, ...] | None = None) -> float | NDArray[np.float64]:
        """Draw U[0, 1) values."""
        if size is None:
            return float(self.generator.random())
        return self.generator.random(size)

    def __repr__(self) -> str:
        return f"RngStream(seed={self.seed}, stream_id={self.stream_id})"


def weibull_quantile(p: WeibullParams, u: float) -> float:
    """Inverse CDF of the Weibull distribution at ``u`` in [0, 1)."""
    return p.scale * (-math.log1p(-u)) ** (1.0 / p.shape)


def weibull_sample(
    p: WeibullParams,
    rng: RngStream,
    size: int | None = None,
) -> float | NDArray[np.float64]:
    """Draw Weibull durations in hours.

    Args:
    ----
        p: Shape and scale
        rng: Source stream
        size: Number of draws; None returns a scalar

    Returns:
    -------
        scale * (-ln(1 - U))^(1/shape) for U ~ U[0, 1)

    """
    if size is None:
        return weibull_quantile(p, float(rng.uniform()))
    u = rng.uniform(size)
    return p.scale * (-np.log1p(-np.asarray(u))) ** (1.0 / p.shape)


def weibull_mean_std(p: WeibullParams) -> tuple[float, float]:
    """Analytic mean and standard deviation of a Weibull distribution."""
    g1 = float(gamma(1.0 + 1.0 / p.shape))
    g2 = float(gamma(1.0 + 2.0 / p.shape))
    variance = max(g2 - g1 * g1, 0.0)
    return p.scale * g1, p.scale * math.sqrt(variance)


def _check_interval(lo: float, hi: float) -> None:
    if lo < 0 or lo > hi:
        raise ParameterDomainError(f"uniform interval requires 0 <= lo <= hi, got [{lo}, {hi}]")


def uniform_quantile(lo: float, hi: float, u: float) -> float:
    return lo + (hi - lo) * u


def uniform_sample(
    lo: float,
    hi: float,
    rng: RngStream,
    size: int | None = None,
) -> float | NDArray[np.float64]:
    """Draw from U[lo, hi]; a degenerate interval returns lo."""
    _check_interval(lo, hi)
    if size is None:
        return uniform_quantile(lo, hi, float(rng.uniform()))
    return lo + (hi - lo) * np.asarray(rng.uniform(size))


def _cumulative_weights(weights: Sequence[float] | NDArray[np.float64]) -> tuple[NDArray[np.float64], int]:
    w = np.asarray(weights, dtype=float)
    if w.size == 0 or np.any(w < 0) or not np.all(np.isfinite(w)) or w.sum() <= 0:
        raise ParameterDomainError(f"categorical weights must be non-empty, non-negative, with positive sum: {list(w)}")
    cumulative = np.cumsum(w) / w.sum()
    last_positive = int(np.flatnonzero(w > 0)[-1])
    return cumulative, last_positive


def categorical_index(weights: Sequence[float], u: float) -> int:
    """Inverse-transform categorical draw for a single uniform ``u``."""
    cumulative, last_positive = _cumulative_weights(weights)
    idx = int(np.searchsorted(cumulative, u, side="right"))
    return min(idx, last_positive)


def categorical_sample(
    weights: Sequence[float],
    rng: RngStream,
    size: int | None = None,
) -> int | NDArray[np.int64]:
    """Return index i with probability weights[i] / sum(weights)."""
    cumulative, last_positive = _cumulative_weights(weights)
    if size is None:
        idx = int(np.searchsorted(cumulative, float(rng.uniform()), side="right"))
        return min(idx, last_positive)
    draws = np.searchsorted(cumulative, np.asarray(rng.uniform(size)), side="right")
    return np.minimum(draws, last_positive).astype(np.int64)


def validate_rate_table(rates: ArrayLike) -> NDArray[np.float64]:
    """Coerce a 7x24 arrival-rate grid, rejecting bad shapes and negative rates."""
    table = np.asarray(rates, dtype=float)
    if table.shape != (DAYS_PER_WEEK, HOURS_PER_DAY):
        raise ParameterDomainError(f"rate table must be 7x24, got shape {table.shape}")
    if np.any(table < 0) or not np.all(np.isfinite(table)):
        raise ParameterDomainError("rate table entries must be finite and non-negative")
    return table


def rate_at(table: NDArray[np.float64], start_day: int, t: ArrayLike) -> NDArray[np.float64]:
    """Arrival rate in force at scenario time ``t`` (vectorized)."""
    times = np.asarray(t, dtype=float)
    day = (start_day + np.floor(times / HOURS_PER_DAY).astype(np.int64)) % DAYS_PER_WEEK
    hour = np.floor(times).astype(np.int64) % HOURS_PER_DAY
    return table[day, hour]


def nhpp_arrivals(
    rates: ArrayLike,
    start_day: int,
    horizon: float,
    rng: RngStream,
) -> NDArray[np.float64]:
    """Generate nonhomogeneous Poisson arrivals by thinning.

    Candidate arrivals come from a homogeneous process at the majorant rate
    (the largest table entry). Each candidate at time t is kept with
    probability rate(t) / majorant.

    Args:
    ----
        rates: 7x24 grid indexed by (day-of-week, hour-of-day), arrivals per hour
        start_day: Day of week at time 0 (0 = Monday)
        horizon: Length of the arrival window in hours
        rng: Source stream

    Returns:
    -------
        Strictly increasing arrival times in [0, horizon)

    """
    if horizon <= 0:
        raise ParameterDomainError(f"horizon must be positive, got {horizon}")
    table = validate_rate_table(rates)
    majorant = float(table.max())
    if majorant == 0.0:
        return np.empty(0, dtype=float)

    gen = rng.generator
    n_candidates = int(gen.poisson(majorant * horizon))
    # Given their count, homogeneous Poisson points are sorted uniforms.
    candidates = np.sort(gen.random(n_candidates) * horizon)
    keep = gen.random(n_candidates) * majorant < rate_at(table, start_day, candidates)
    arrivals = candidates[keep]
    logger.debug("nhpp: %d candidates, %d accepted", n_candidates, arrivals.size)
    return arrivals
