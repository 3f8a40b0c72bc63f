"""Student-t confidence intervals over replication statistics."""

import math
from collections.abc import Sequence

import numpy as np
from scipy import stats


def t_interval(
    values: Sequence[float] | np.ndarray,
    confidence: float = 0.95,
) -> tuple[float, float | None, float | None]:
    """Mean and two-sided t interval; bounds are None when fewer than two values."""
    data = np.asarray(values, dtype=float)
    if data.size == 0:
        return math.nan, None, None
    mean = float(data.mean())
    if data.size < 2:
        return mean, None, None
    half = float(stats.t.ppf(0.5 + confidence / 2, data.size - 1) * data.std(ddof=1) / math.sqrt(data.size))
    return mean, mean - half, mean + half
