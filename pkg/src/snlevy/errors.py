"""Exception hierarchy shared across the package."""


class SnLevyError(Exception):
    """Base class for all library errors."""


class DomainError(SnLevyError, ValueError):
    """Arguments outside the mathematical domain of an operation."""


class NumericError(SnLevyError, RuntimeError):
    """A numerical procedure failed to converge or lost accuracy."""


class UnsupportedError(SnLevyError):
    """The quantity is not defined (or not computable) for this model."""


class AdmissibilityError(SnLevyError, ValueError):
    """Target measure fails the admissibility balance condition.

    Carries both sides of the balance so callers can report the mismatch.
    """

    def __init__(self, message, lhs=None, rhs=None):
        super().__init__(message)
        self.lhs = lhs
        self.rhs = rhs
