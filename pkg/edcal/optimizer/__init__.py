"""Derivative-free search over granular parameters."""

from .lattice import from_lattice, lattice_bounds, to_lattice
from .penalty import penalty
from .search import LatticeSearch, PointCache, SolveSettings, improving_neighbors, penalized_value, solve

__all__ = [
    "LatticeSearch",
    "PointCache",
    "SolveSettings",
    "from_lattice",
    "improving_neighbors",
    "lattice_bounds",
    "penalized_value",
    "penalty",
    "to_lattice",
    "solve",
]
