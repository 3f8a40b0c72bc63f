"""Protocol definitions for type checking."""

from typing import TYPE_CHECKING, Protocol

if TYPE_CHECKING:
    from .models.params import ParamVector
    from .models.results import EvaluationResult


class Evaluator(Protocol):
    """Anything the solver can call to score a point."""

    def __call__(self, point: "ParamVector") -> "EvaluationResult":
        """Evaluate the objective and constraints at ``point``.

        Args:
        ----
            point: Full parameter vector on the lattice

        Returns:
        -------
            The evaluation; a failed evaluation has f = inf

        """
        ...
