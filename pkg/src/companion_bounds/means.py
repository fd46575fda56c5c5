"""Arithmetic and generalized logarithmic means, and the mean inequalities
obtained by feeding f(x) = x**s into the midpoint, quarter-point and
endpoint companion bounds.

For 0 < s < 1 the curvature of x**s is negative, so the bounds use
|f''(x)| = s(1-s) x**(s-2).
"""

from __future__ import annotations

import math

from .core import EvaluationResult, HoelderPair
from .errors import InvalidParameter

PROPOSITIONS = ("3.1a", "3.1b", "3.2", "3.3", "3.3c")
NEEDS_Q = frozenset({"3.2", "3.3", "3.3c"})
PROP_TOL = 1e-12


def arithmetic_mean(alpha: float, beta: float) -> float:
    return 0.5 * (alpha + beta)


def generalized_log_mean(alpha: float, beta: float, n: float) -> float:
    """L_n(alpha, beta) = [(beta^(n+1) - alpha^(n+1)) / ((beta - alpha)(n+1))]^(1/n).

    Real ``n`` outside {-1, 0} is accepted. Evaluated through the ratio
    beta/alpha with expm1 so nearly equal arguments do not cancel.
    """
    n = float(n)
    if n in (-1.0, 0.0) or not math.isfinite(n):
        raise InvalidParameter(f"generalized logarithmic mean undefined for n={n}")
    if not (alpha > 0 and beta > 0):
        raise InvalidParameter("generalized logarithmic mean needs positive arguments")
    if alpha == beta:
        raise InvalidParameter("generalized logarithmic mean needs alpha != beta")
    lo, hi = min(alpha, beta), max(alpha, beta)
    lr = math.log(hi / lo)
    ratio = math.expm1((n + 1.0) * lr) / (math.expm1(lr) * (n + 1.0))
    return lo * ratio ** (1.0 / n)


def _check(pid: str, a: float, b: float, s: float, q):
    if pid not in PROPOSITIONS:
        raise InvalidParameter(f"unknown proposition {pid!r}; choose from {', '.join(PROPOSITIONS)}")
    if not 0 < a < b:
        raise InvalidParameter(f"need 0 < a < b, got a={a}, b={b}")
    if not 0 < s < 1:
        raise InvalidParameter(f"need 0 < s < 1, got s={s}")
    if pid in NEEDS_Q:
        if q is None:
            raise InvalidParameter(f"proposition {pid} needs q > 1")
        return HoelderPair.from_q(q)
    return None


def proposition_lhs(pid: str, a: float, b: float, s: float) -> float:
    """The mean difference bounded by each proposition (absolute value)."""
    Ls = generalized_log_mean(a, b, s) ** s
    if pid in ("3.1a", "3.2"):
        return abs(Ls - arithmetic_mean(a, b) ** s)
    if pid == "3.1b":
        return abs(Ls - arithmetic_mean(((3 * a + b) / 4) ** s, ((a + 3 * b) / 4) ** s))
    if pid == "3.3":
        return abs(Ls - arithmetic_mean(a ** s, b ** s))
    if pid == "3.3c":
        # endpoint companion form: keeps the derivative correction
        slope_gap = s * a ** (s - 1) - s * b ** (s - 1)
        return abs(Ls - arithmetic_mean(a ** s, b ** s) - (b - a) / 8 * slope_gap)
    raise InvalidParameter(f"unknown proposition {pid!r}")


def _rhs(pid: str, a: float, b: float, s: float, hp, curvature: float, quarter_denominator: float = 128.0) -> float:
    A = arithmetic_mean(a, b)
    width2 = (b - a) ** 2
    if pid == "3.1a":
        k = 8 * (s + 1) * (s + 2) * (s + 3)
        return width2 * curvature / k * (a ** (s - 2) + (s * s + 3 * s + 2) * A ** (s - 2) + b ** (s - 2))
    if pid == "3.1b":
        k = quarter_denominator * (s + 1) * (s + 2) * (s + 3)
        inner = ((3 * a + b) / 4) ** (s - 2) + ((a + 3 * b) / 4) ** (s - 2)
        return width2 * curvature / k * (2 * (a ** (s - 2) + b ** (s - 2)) + (3 * s * s + 5 * s + 6) * inner)

    q, p = hp.q, hp.p
    e = (s - 2) * q
    hoelder = (2 * p + 1) ** (1 / p) * (s + 1) ** (1 / q)
    if pid == "3.2":
        return width2 * curvature / (16 * hoelder) * ((a ** e + A ** e) ** (1 / q) + (A ** e + b ** e) ** (1 / q))
    # 3.3 and 3.3c share the endpoint bound
    return width2 * curvature / (8 * hoelder) * (a ** e + b ** e) ** (1 / q)


def proposition_rhs(pid: str, a: float, b: float, s: float, q: float | None = None) -> float:
    hp = _check(pid, a, b, s, q)
    return _rhs(pid, a, b, s, hp, curvature=s * (1 - s))


def proposition_rhs_uncorrected(pid: str, a: float, b: float, s: float, q: float | None = None) -> float:
    """Known-bad variant with the signed coefficient s(s-1) and, for 3.1b,
    the denominator 8 instead of 128. Always nonpositive for 0 < s < 1."""
    hp = _check(pid, a, b, s, q)
    return _rhs(pid, a, b, s, hp, curvature=s * (s - 1), quarter_denominator=8.0)


def verify_proposition(pid: str, a: float, b: float, s: float, q: float | None = None,
                       rel_tol: float = PROP_TOL) -> EvaluationResult:
    """Evaluate a mean inequality in closed form.

    ``hypothesis_certified`` is set from the analytic fact that
    s(1-s) x^(s-2) is positive and convex on (0, inf); sweeps re-certify it
    numerically.
    """
    _check(pid, a, b, s, q)
    lhs = proposition_lhs(pid, a, b, s)
    rhs = proposition_rhs(pid, a, b, s, q)
    return EvaluationResult.judge(lhs, rhs, quad_error=0.0, hypothesis_certified=True, rel_tol=rel_tol)
