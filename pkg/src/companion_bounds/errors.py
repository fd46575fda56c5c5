"""Exception types shared across the package."""

from __future__ import annotations


class DomainError(ValueError):
    """An argument lies outside the region where a function is finite."""


class InvalidParameter(ValueError):
    """A numeric parameter violates its documented range."""


class HypothesisViolated(ValueError):
    """A precondition on the function class does not hold on the samples."""


class UnknownFunction(ValueError):
    """A catalog name could not be resolved."""


class NumericalFailure(ArithmeticError):
    """Adaptive quadrature stopped before meeting its tolerance.

    The best available value and its error estimate travel with the
    exception so callers can still report them.
    """

    def __init__(self, message: str, value: float, error_estimate: float, subdivisions: int):
        super().__init__(message)
        self.value = value
        self.error_estimate = error_estimate
        self.subdivisions = subdivisions
