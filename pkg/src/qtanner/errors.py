"""Exception types shared across the package."""

from __future__ import annotations


class QTannerError(Exception):
    """Base class for all package errors."""


class ValidationError(QTannerError):
    """Bad user input: malformed arguments, files, or preconditions."""


class DimensionMismatchError(ValidationError):
    """Operands have incompatible shapes."""


class SizeLimitError(ValidationError):
    """Instance exceeds the bound for exhaustive enumeration."""


class SearchExhaustedError(QTannerError):
    """A randomized search hit its attempt cap without success.

    Carries the number of attempts and, when available, the best
    candidate seen so far.
    """

    def __init__(self, message: str, attempts: int, best=None):
        super().__init__(message)
        self.attempts = attempts
        self.best = best


class InvariantViolationError(QTannerError):
    """An internal consistency check failed; indicates a construction bug."""


class ConvergenceError(QTannerError):
    """An iterative numerical routine hit its iteration cap."""
