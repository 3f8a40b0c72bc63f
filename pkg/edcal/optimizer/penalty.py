"""Exterior l1 penalty for inequality constraints."""

import numpy as np
from numpy.typing import ArrayLike


def penalty(f: float, g: ArrayLike, h: ArrayLike, eps: float) -> float:
    """f + (1/eps) * (sum max(0, g_i) + sum max(0, h_j))."""
    if eps <= 0:
        raise ValueError(f"eps must be positive, got {eps}")
    violation = np.sum(np.maximum(0.0, np.asarray(g, dtype=float)))
    violation += np.sum(np.maximum(0.0, np.asarray(h, dtype=float)))
    return float(f + violation / eps)
