"""Right-continuous piecewise-constant functions on [0, inf)."""

from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray


@dataclass(frozen=True, eq=False)
class StepFunction:
    """Value 0 before the first breakpoint, values[j] on [breakpoints[j], breakpoints[j+1]).

    Used for empirical CDFs and their replication averages.
    """

    breakpoints: NDArray[np.float64]
    values: NDArray[np.float64]

    def __post_init__(self) -> None:
        if self.breakpoints.shape != self.values.shape or self.breakpoints.ndim != 1:
            raise ValueError("breakpoints and values must be 1-d arrays of equal length")
        if self.breakpoints.size and np.any(np.diff(self.breakpoints) <= 0):
            raise ValueError("breakpoints must be strictly increasing")

    def __call__(self, t: ArrayLike) -> NDArray[np.float64]:
        idx = np.searchsorted(self.breakpoints, np.asarray(t, dtype=float), side="right") - 1
        out = np.where(idx >= 0, self.values[np.clip(idx, 0, None)], 0.0)
        return np.asarray(out, dtype=float)

    @property
    def terminal_value(self) -> float:
        return float(self.values[-1]) if self.values.size else 0.0

    def is_cdf(self, atol: float = 1e-12) -> bool:
        """Nondecreasing, within [0, 1], terminal value 1."""
        v = self.values
        return bool(
            v.size
            and np.all(np.diff(v) >= -atol)
            and v[0] >= -atol
            and abs(v[-1] - 1.0) <= atol,
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, StepFunction):
            return NotImplemented
        return bool(
            np.array_equal(self.breakpoints, other.breakpoints)
            and np.array_equal(self.values, other.values),
        )

    def __hash__(self) -> int:
        return hash((self.breakpoints.tobytes(), self.values.tobytes()))

    def __repr__(self) -> str:
        return f"StepFunction({self.breakpoints.size} steps)"
