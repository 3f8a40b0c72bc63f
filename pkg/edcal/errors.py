"""Exception hierarchy for the calibration toolkit.

Every error raised on purpose by edcal derives from EdcalError and from the
builtin class callers would naturally catch (ValueError, RuntimeError, ...).
The CLI maps these to exit codes.
"""


class EdcalError(Exception):
    """Base class for all edcal errors."""


class ParameterDomainError(EdcalError, ValueError):
    """Distribution parameters outside their mathematical domain."""


class ConfigurationError(EdcalError, ValueError):
    """Invalid scenario, parameter file, or infeasible (tag, unit) pair."""


class DataValidationError(EdcalError, ValueError):
    """A dataset or annotation file violates its schema or invariants.

    Args:
    ----
        message: Human readable description
        line: 1-based line number in the source file, when known
        offending_ids: Patient ids that failed validation

    """

    def __init__(
        self,
        message: str,
        line: int | None = None,
        offending_ids: list[int] | None = None,
    ) -> None:
        self.line = line
        self.offending_ids = offending_ids or []
        if line is not None:
            message = f"line {line}: {message}"
        if self.offending_ids:
            shown = ", ".join(str(i) for i in self.offending_ids[:20])
            more = "" if len(self.offending_ids) <= 20 else f" (+{len(self.offending_ids) - 20} more)"
            message = f"{message} [ids: {shown}{more}]"
        super().__init__(message)


class EmptySampleError(EdcalError, ValueError):
    """An ECDF or statistic was requested on an empty sample."""


class DegenerateSampleError(EdcalError, ValueError):
    """A sample has too few distinct values to fit a distribution."""


class DegenerateReferenceError(EdcalError, ZeroDivisionError):
    """A relative-error constraint has a zero real reference value."""


class EngineError(EdcalError, RuntimeError):
    """Logic error inside the simulation kernel (always a bug)."""
