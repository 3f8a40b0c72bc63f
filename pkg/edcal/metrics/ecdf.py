"""Empirical CDFs and the squared-difference integral objective."""

from collections.abc import Mapping, Sequence
from typing import TypeVar

import numpy as np
from numpy.typing import ArrayLike

from ..errors import EmptySampleError
from ..models.step_function import StepFunction

K = TypeVar("K")


def ecdf(samples: ArrayLike) -> StepFunction:
    """F(t) = (# samples <= t) / k, with one breakpoint per distinct value."""
    values = np.asarray(samples, dtype=float).ravel()
    if values.size == 0:
        raise EmptySampleError("cannot build an ECDF from an empty sample")
    breakpoints, counts = np.unique(values, return_counts=True)
    heights = np.cumsum(counts) / values.size
    heights[-1] = 1.0
    return StepFunction(breakpoints, heights)


def mean_ecdf(fs: Sequence[StepFunction]) -> StepFunction:
    """Pointwise mean of step functions on the union of their breakpoints."""
    if not fs:
        raise ValueError("mean_ecdf needs at least one step function")
    if len(fs) == 1:
        return fs[0]
    grid = np.unique(np.concatenate([f.breakpoints for f in fs]))
    values = np.mean([f(grid) for f in fs], axis=0)
    return StepFunction(grid, values)


def ecdf_sq_integral(F1: StepFunction, F2: StepFunction) -> float:
    """Exact value of the integral over [0, inf) of (F1 - F2)^2.

    Both functions are constant between consecutive points of the merged
    breakpoint grid and equal to 1 beyond its last point, so the integral is a
    finite sum of rectangle areas.
    """
    grid = np.union1d(F1.breakpoints, F2.breakpoints)
    if grid.size < 2:
        return 0.0
    diff = F1(grid[:-1]) - F2(grid[:-1])
    return float(np.sum(diff * diff * np.diff(grid)))


def objective(sim: Mapping[K, StepFunction], real: Mapping[K, StepFunction]) -> float:
    """Sum of ecdf_sq_integral over a shared index set."""
    if set(sim) != set(real):
        missing = set(sim) ^ set(real)
        raise ValueError(f"simulated and real ECDFs are indexed differently: {sorted(map(str, missing))}")
    return float(sum(ecdf_sq_integral(sim[k], real[k]) for k in sim))
