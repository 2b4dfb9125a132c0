"""Exception hierarchy shared by all modules."""


class SteklovError(Exception):
    """Base class for every error raised by this package."""


class DomainError(SteklovError, ValueError):
    """Invalid graph, domain, window or argument (CLI exit code 2)."""


class NotSPDError(SteklovError, ArithmeticError):
    """A matrix expected to be symmetric positive definite is not."""


class ConvergenceError(SteklovError, ArithmeticError):
    """An iterative method stopped before reaching its tolerance."""

    def __init__(self, message, residual=None, bracket=None):
        super().__init__(message)
        self.residual = residual
        self.bracket = bracket


class BudgetExceeded(SteklovError):
    """A size budget (vertices, enumeration) was exceeded (CLI exit code 3)."""


class MonotonicityError(SteklovError, AssertionError):
    """A quantity that must be monotone along an exhaustion was not."""
