"""Integer lattice coordinates of granular parameters.

Entry k of a ParamVector is i_k * delta_k for an integer i_k. The optimizer
works on the integers so that every trial point is exactly representable.
"""

import logging
import math

import numpy as np

from ..models.params import Bounds, Granularity, ParamKey, ParamVector

logger = logging.getLogger(__name__)

OFF_LATTICE_TOL = 1e-9


def _inverse(delta: float) -> int | None:
    inverse = 1.0 / delta
    return round(inverse) if abs(inverse - round(inverse)) < 1e-9 else None


def to_lattice(p: ParamVector, g: Granularity, keys: list[ParamKey] | None = None) -> np.ndarray:
    """Integer coordinates of ``p``; entries off the lattice are rounded with a warning."""
    keys = keys or p.keys()
    ints = np.empty(len(keys), dtype=np.int64)
    for j, key in enumerate(keys):
        delta = g.delta(key)
        exact = p[key] / delta
        ints[j] = round(exact)
        if abs(p[key] - from_lattice_value(int(ints[j]), delta)) > OFF_LATTICE_TOL:
            logger.warning("%s = %r is not a multiple of %g; rounded", key.label, p[key], delta)
    return ints


def from_lattice_value(i: int, delta: float) -> float:
    inverse = _inverse(delta)
    return i / inverse if inverse is not None else i * delta


def from_lattice(ints: np.ndarray, g: Granularity, keys: list[ParamKey]) -> ParamVector:
    """ParamVector whose entry k is ints[k] * delta_k."""
    if len(ints) != len(keys):
        raise ValueError(f"{len(keys)} keys but {len(ints)} lattice coordinates")
    return ParamVector({key: from_lattice_value(int(i), g.delta(key)) for key, i in zip(keys, ints, strict=True)})


def lattice_bounds(bounds: Bounds, g: Granularity, keys: list[ParamKey]) -> tuple[np.ndarray, np.ndarray]:
    """Smallest and largest admissible integer coordinate per key."""
    lo = np.array([math.ceil(bounds.lower[k] / g.delta(k) - OFF_LATTICE_TOL) for k in keys], dtype=np.int64)
    hi = np.array([math.floor(bounds.upper[k] / g.delta(k) + OFF_LATTICE_TOL) for k in keys], dtype=np.int64)
    if np.any(lo > hi):
        bad = [k.label for k, a, b in zip(keys, lo, hi, strict=True) if a > b]
        raise ValueError(f"bounds contain no lattice point for {bad}")
    return lo, hi
