"""Exception types shared across the package."""

from __future__ import annotations


class VaszeroError(Exception):
    """Base class for every error raised by this package."""


class NegativeResult(VaszeroError):
    pass


class DimMismatch(VaszeroError):
    pass


class BadPosition(VaszeroError):
    pass


class NotComparable(VaszeroError):
    pass


class UnknownAction(VaszeroError):
    pass


class UnknownState(VaszeroError):
    pass


class NameCollision(VaszeroError):
    pass


class NotNormalized(VaszeroError):
    pass


class UnnormalizableZeroTest(VaszeroError):
    pass


class AlphabetMismatch(VaszeroError):
    pass


class ParseError(VaszeroError):
    pass


class ValidationError(VaszeroError):
    pass


class BudgetExhausted(VaszeroError):
    """Raised when an analysis runs out of elementary steps.

    ``partial`` holds whatever intermediate data the raiser wants to expose
    (for the basis driver: the complement generators found so far).
    """

    def __init__(self, message: str = "budget exhausted", partial=None):
        super().__init__(message)
        self.partial = partial
