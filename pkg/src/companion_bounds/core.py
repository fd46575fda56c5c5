"""Small value types used by every module."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import InvalidParameter

EPS = 2.220446049250313e-16


@dataclass(frozen=True)
class Interval:
    a: float
    b: float

    def __post_init__(self):
        if not (math.isfinite(self.a) and math.isfinite(self.b)):
            raise InvalidParameter(f"interval endpoints must be finite, got ({self.a}, {self.b})")
        if not self.a < self.b:
            raise InvalidParameter(f"interval needs a < b, got ({self.a}, {self.b})")

    @property
    def length(self) -> float:
        return self.b - self.a

    @property
    def mid(self) -> float:
        return 0.5 * (self.a + self.b)

    def reflect(self, x: float) -> float:
        """Mirror image a + b - x."""
        return self.a + self.b - x

    @classmethod
    def parse(cls, text: str) -> "Interval":
        """Parse ``"a,b"`` (also accepts ``a:b``)."""
        sep = "," if "," in text else ":"
        parts = text.split(sep)
        if len(parts) != 2:
            raise InvalidParameter(f"cannot parse interval {text!r}; expected 'a,b'")
        try:
            return cls(float(parts[0]), float(parts[1]))
        except ValueError as exc:
            raise InvalidParameter(f"cannot parse interval {text!r}: {exc}") from None

    def __str__(self):
        return f"[{self.a:g},{self.b:g}]"


@dataclass(frozen=True)
class HoelderPair:
    """Conjugate exponents; build with :meth:`from_q`."""

    q: float
    p: float

    def __post_init__(self):
        if not (self.q > 1 and math.isfinite(self.q)):
            raise InvalidParameter(f"Hoelder exponent q must be finite and > 1, got {self.q}")
        if abs(1.0 / self.p + 1.0 / self.q - 1.0) > 1e-15:
            raise InvalidParameter(f"p={self.p} is not conjugate to q={self.q}")

    @classmethod
    def from_q(cls, q: float) -> "HoelderPair":
        q = float(q)
        if not q > 1:
            raise InvalidParameter(f"Hoelder exponent q must be > 1, got {q}")
        return cls(q=q, p=q / (q - 1.0))


def check_s(s: float) -> float:
    s = float(s)
    if not (0.0 < s <= 1.0):
        raise InvalidParameter(f"s must lie in (0, 1], got {s}")
    return s


@dataclass(frozen=True)
class Estimate:
    """A computed quantity with an absolute error estimate."""

    value: float
    error: float


def sum_with_error(terms) -> Estimate:
    """Accurate sum plus a floating-point rounding bound for the inputs."""
    terms = [float(t) for t in terms]
    total = math.fsum(terms)
    return Estimate(total, 4.0 * EPS * math.fsum(abs(t) for t in terms))


class Verdict(str, Enum):
    HOLDS = "holds"
    VIOLATED = "violated"
    HYPOTHESIS_FAILED = "hypothesis_failed"
    NUMERICAL_FAILURE = "numerical_failure"


def tightness_ratio(lhs: float, rhs: float) -> float:
    if rhs == 0.0:
        return 0.0 if lhs == 0.0 else math.inf
    return abs(lhs) / rhs


@dataclass(frozen=True)
class EvaluationResult:
    """One inequality check: signed lhs, bound, and how they compare.

    ``slack`` is ``rhs - |lhs|`` for bounds on an absolute deviation.
    Two-sided chains (Hermite-Hadamard) store the smaller of their two
    margins instead.
    """

    lhs: float
    rhs: float
    slack: float
    tightness: float
    quad_error: float
    hypothesis_certified: bool
    verdict: Verdict
    detail: str = ""

    @classmethod
    def judge(
        cls,
        lhs: float,
        rhs: float,
        quad_error: float,
        hypothesis_certified: bool,
        rel_tol: float = 1e-9,
        slack: float | None = None,
        detail: str = "",
    ) -> "EvaluationResult":
        if slack is None:
            slack = rhs - abs(lhs)
        allowance = rel_tol * (1.0 + abs(rhs)) + 5.0 * quad_error
        if not hypothesis_certified:
            verdict = Verdict.HYPOTHESIS_FAILED
        elif slack >= -allowance:
            verdict = Verdict.HOLDS
        else:
            verdict = Verdict.VIOLATED
        return cls(
            lhs=lhs,
            rhs=rhs,
            slack=slack,
            tightness=tightness_ratio(lhs, rhs),
            quad_error=quad_error,
            hypothesis_certified=hypothesis_certified,
            verdict=verdict,
            detail=detail,
        )

    @classmethod
    def failure(cls, detail: str, hypothesis_certified: bool = False) -> "EvaluationResult":
        nan = math.nan
        return cls(nan, nan, nan, nan, nan, hypothesis_certified, Verdict.NUMERICAL_FAILURE, detail)
