"""Exception hierarchy shared by every module."""


class QuonError(Exception):
    """Base class for all library errors."""


class DomainError(QuonError, ValueError):
    """Inputs lie outside the domain where a quantity is defined."""

    def __init__(self, message, *, boundary=None):
        super().__init__(message)
        self.boundary = boundary


class SpectrumParseError(QuonError, ValueError):
    """A spectrum file could not be parsed.

    ``location`` is a 1-based line number for CSV and a 0-based element
    index for JSON, or ``None`` when the failure is not tied to one record.
    """

    def __init__(self, message, *, location=None):
        super().__init__(message)
        self.location = location


class AccuracyError(QuonError, ArithmeticError):
    """A numerical procedure failed to reach its requested accuracy."""

    def __init__(self, message, *, best=None, bound=None, bracket=None):
        super().__init__(message)
        self.best = best
        self.bound = bound
        self.bracket = bracket
