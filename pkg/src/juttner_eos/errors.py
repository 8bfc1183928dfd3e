"""Exception hierarchy shared by every module."""


class JuttnerError(Exception):
    """Base class for all library errors."""


class DomainError(JuttnerError, ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class AccuracyError(JuttnerError, ArithmeticError):
    """A numerical routine could not reach its requested tolerance."""


class BracketError(JuttnerError, RuntimeError):
    """No sign change was found while expanding a root bracket."""

    def __init__(self, message, lo=None, hi=None):
        super().__init__(message)
        self.lo = lo
        self.hi = hi


class InvariantViolation(JuttnerError, RuntimeError):
    """A proven mathematical fact failed numerically (signals an accuracy bug)."""
