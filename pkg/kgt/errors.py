"""
Exception hierarchy. Every error knows the CLI exit code it maps to.
"""

from typing import Optional, Sequence


class KGTError(Exception):
    """Base class for all library errors."""

    exit_code = 3


class DomainError(KGTError, ValueError):
    """Argument outside the mathematical or physical domain."""


class AccuracyError(KGTError):
    """Argument beyond the range with a guaranteed accuracy contract."""


class PreconditionError(KGTError, ValueError):
    """Operation called on a point or data set it is not defined for."""


class QuadratureError(KGTError):
    """Numerical integral failed to reach the requested tolerance."""

    def __init__(self, message: str, achieved: Optional[float] = None):
        super().__init__(message)
        self.achieved = achieved


class ConfigurationError(KGTError):
    """Inconsistent solver configuration (e.g. CFL violation)."""

    exit_code = 2


class GridMismatchError(KGTError):
    """Two field grids that were expected to coincide do not."""

    exit_code = 2


class ConeReachedBoundaryError(KGTError):
    """The wave cone of the initial data reached a Dirichlet boundary."""

    def __init__(self, step_index: int, time: float):
        super().__init__(
            f"wave cone reached the grid boundary at step {step_index} (t={time:.6g} s); "
            f"enlarge the domain or shorten the run"
        )
        self.step_index = step_index
        self.time = time


class VerificationFailure(KGTError):
    """One or more acceptance cases failed."""

    exit_code = 1

    def __init__(self, failed: Sequence[str]):
        super().__init__("verification failed: " + ", ".join(failed))
        self.failed = list(failed)
