"""Companion-of-Ostrowski identities and their curvature bounds.

Deviations are signed; every bound is compared against the absolute value.
Bounds never check their own hypotheses -- the sweep layer pairs them with
the certifiers in :mod:`companion_bounds.funcat`.

Notation used below: ``y = a + b - x`` is the mirror of ``x`` and
``h = a + b - 2x`` the width of the central piece.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np
from scipy.optimize import minimize_scalar

from .core import Estimate, HoelderPair, Interval, check_s, sum_with_error
from .errors import InvalidParameter
from .funcat import FunctionSpec
from .quadrature import integrate

IDENTITY_TOL = 1e-11
# relative budget (against the integral of |g|) for large-magnitude integrands
REL_TOL = 1e-13


def _companion_x(iv: Interval, x: float) -> float:
    x = float(x)
    slop = 1e-12 * iv.length
    if not (iv.a - slop <= x <= iv.mid + slop):
        raise InvalidParameter(f"x={x} must lie in [a, (a+b)/2] = [{iv.a}, {iv.mid}]")
    return min(max(x, iv.a), iv.mid)


def _full_x(iv: Interval, x: float) -> float:
    x = float(x)
    slop = 1e-12 * iv.length
    if not (iv.a - slop <= x <= iv.b + slop):
        raise InvalidParameter(f"x={x} must lie in [a, b] = [{iv.a}, {iv.b}]")
    return min(max(x, iv.a), iv.b)


def _d2(fs: FunctionSpec, t: float) -> float:
    return abs(float(fs.f2(t)))


def integral_mean(fs: FunctionSpec, iv: Interval, tol: float = IDENTITY_TOL) -> Estimate:
    """(1/(b-a)) * integral of f over the interval."""
    res = integrate(fs.f, iv.a, iv.b, tol, rel_tol=REL_TOL)
    return Estimate(res.value / iv.length, res.error_estimate / iv.length)


def companion_deviation(fs: FunctionSpec, iv: Interval, x: float, tol: float = IDENTITY_TOL,
                        mean: Estimate | None = None) -> Estimate:
    """Signed deviation of the companion formula from the integral mean.

    mean(f) - [f(x) + f(y)]/2 + (x - (3a+b)/4) [f'(x) - f'(y)]/2.
    ``mean`` may be passed in when the caller already integrated ``f``.
    """
    x = _companion_x(iv, x)
    y = iv.reflect(x)
    if mean is None:
        mean = integral_mean(fs, iv, tol)
    corr = 0.5 * (x - (3.0 * iv.a + iv.b) / 4.0)
    est = sum_with_error([
        mean.value,
        -0.5 * float(fs.f(x)), -0.5 * float(fs.f(y)),
        corr * float(fs.f1(x)), -corr * float(fs.f1(y)),
    ])
    return Estimate(est.value, est.error + mean.error)


def liu_identity_rhs(fs: FunctionSpec, iv: Interval, x: float, tol: float = IDENTITY_TOL) -> Estimate:
    """Three-piece curvature integral equal to :func:`companion_deviation`.

    (1/(2(b-a))) [ int_a^x (t-a)^2 f'' + int_x^y (t-(a+b)/2)^2 f''
    + int_y^b (t-b)^2 f'' ]. Empty pieces are skipped.
    """
    x = _companion_x(iv, x)
    a, b, m = iv.a, iv.b, iv.mid
    y = iv.reflect(x)
    f2 = fs.f2
    pieces = []
    if x > a:
        pieces.append(integrate(lambda t: (t - a) ** 2 * f2(t), a, x, tol, rel_tol=REL_TOL))
        pieces.append(integrate(lambda t: (t - b) ** 2 * f2(t), y, b, tol, rel_tol=REL_TOL))
    if x < m:
        pieces.append(integrate(lambda t: (t - m) ** 2 * f2(t), x, y, tol, rel_tol=REL_TOL))
    scale = 1.0 / (2.0 * iv.length)
    est = sum_with_error([scale * p.value for p in pieces])
    return Estimate(est.value, est.error + scale * math.fsum(p.error_estimate for p in pieces))


def set_identity_pair(fs: FunctionSpec, iv: Interval, x: float, tol: float = IDENTITY_TOL,
                      mean: Estimate | None = None) -> tuple[Estimate, Estimate]:
    """Both sides of the one-point perturbed-midpoint identity.

    lhs = mean(f) - f(x) + (x - (a+b)/2) f'(x)
    rhs = (x-a)^3/(2(b-a)) int_0^1 t^2 f''(tx+(1-t)a) dt
        + (b-x)^3/(2(b-a)) int_0^1 t^2 f''(tx+(1-t)b) dt
    """
    x = _full_x(iv, x)
    a, b = iv.a, iv.b
    if mean is None:
        mean = integral_mean(fs, iv, tol)
    lhs = sum_with_error([mean.value, -float(fs.f(x)), (x - iv.mid) * float(fs.f1(x))])
    lhs = Estimate(lhs.value, lhs.error + mean.error)

    f2 = fs.f2
    terms, errs = [], []
    for end, w in ((a, (x - a) ** 3), (b, (b - x) ** 3)):
        if w == 0.0:
            continue
        c = w / (2.0 * iv.length)
        res = integrate(lambda t, end=end: t * t * f2(t * x + (1.0 - t) * end), 0.0, 1.0, tol, rel_tol=REL_TOL)
        terms.append(c * res.value)
        errs.append(c * res.error_estimate)
    rhs = sum_with_error(terms)
    return lhs, Estimate(rhs.value, rhs.error + math.fsum(errs))


class IdentityCheck(NamedTuple):
    x: float
    lhs: Estimate
    rhs: Estimate
    residual: float
    allowance: float

    @property
    def passed(self) -> bool:
        return self.residual <= self.allowance


IDENTITY_FORMS = ("companion", "one-point")


def identity_check(fs: FunctionSpec, iv: Interval, x: float, form: str = "companion",
                   tol: float = IDENTITY_TOL, mean: Estimate | None = None) -> IdentityCheck:
    """Residual |lhs - rhs| of an identity, allowed 5x the combined error estimates."""
    if form == "companion":
        lhs = companion_deviation(fs, iv, x, tol, mean)
        rhs = liu_identity_rhs(fs, iv, x, tol)
    elif form == "one-point":
        lhs, rhs = set_identity_pair(fs, iv, x, tol, mean)
    else:
        raise InvalidParameter(f"unknown identity form {form!r}; choose from {', '.join(IDENTITY_FORMS)}")
    return IdentityCheck(float(x), lhs, rhs, abs(lhs.value - rhs.value), 5.0 * (lhs.error + rhs.error))


def bound_sconvex_abs(fs: FunctionSpec, iv: Interval, x: float, s: float) -> float:
    """Companion bound when |f''| is s-convex."""
    x = _companion_x(iv, x)
    s = check_s(s)
    a, b = iv.a, iv.b
    y = iv.reflect(x)
    k = (s + 1.0) * (s + 2.0) * (s + 3.0)
    u3 = (x - a) ** 3
    h3 = (a + b - 2.0 * x) ** 3
    outer = u3 / (k * iv.length) * (_d2(fs, a) + _d2(fs, b))
    inner = (4.0 * (s * s + 3.0 * s + 2.0) * u3 + (s * s + s + 2.0) * h3) / (8.0 * k * iv.length)
    return outer + inner * (_d2(fs, x) + _d2(fs, y))


def _hoelder_factor(hp: HoelderPair) -> float:
    return (2.0 * hp.p + 1.0) ** (1.0 / hp.p)


def bound_sconvex_power(fs: FunctionSpec, iv: Interval, x: float, s: float, hp: HoelderPair) -> float:
    """Companion bound when |f''|^q is s-convex (Hoelder split)."""
    x = _companion_x(iv, x)
    s = check_s(s)
    a, b, q = iv.a, iv.b, hp.q
    y = iv.reflect(x)
    fa, fx, fy, fb = (_d2(fs, t) ** q for t in (a, x, y, b))
    u3 = (x - a) ** 3
    h3 = (a + b - 2.0 * x) ** 3
    bracket = (u3 * (fa + fx) ** (1.0 / q)
               + h3 / 4.0 * (fx + fy) ** (1.0 / q)
               + u3 * (fy + fb) ** (1.0 / q))
    return bracket / (2.0 * iv.length * _hoelder_factor(hp) * (s + 1.0) ** (1.0 / q))


def bound_sconcave_power(fs: FunctionSpec, iv: Interval, x: float, s: float, hp: HoelderPair) -> float:
    """Companion bound when |f''|^q is s-concave; uses piece midpoints."""
    x = _companion_x(iv, x)
    s = check_s(s)
    a, b = iv.a, iv.b
    u3 = (x - a) ** 3
    h3 = (a + b - 2.0 * x) ** 3
    bracket = (u3 * _d2(fs, 0.5 * (x + a))
               + h3 / 4.0 * _d2(fs, iv.mid)
               + u3 * _d2(fs, 0.5 * (a + 2.0 * b - x)))
    return 2.0 ** ((s - 1.0) / hp.q) * bracket / (2.0 * iv.length * _hoelder_factor(hp))


def bound_thm12(fs: FunctionSpec, iv: Interval, x: float, s: float, hp: HoelderPair) -> float:
    """One-point bound for :func:`set_identity_pair` under s-concave |f''|^q.

    Each side of x contributes its length cubed times |f''| at that side's
    midpoint.
    """
    x = _full_x(iv, x)
    s = check_s(s)
    a, b = iv.a, iv.b
    pair = (x - a) ** 3 * _d2(fs, 0.5 * (x + a)) + (b - x) ** 3 * _d2(fs, 0.5 * (x + b))
    return 2.0 ** ((s - 1.0) / hp.q) / (_hoelder_factor(hp) * iv.length) * pair / 2.0


def bound_thm12_uncorrected(fs: FunctionSpec, iv: Interval, x: float, s: float, hp: HoelderPair) -> float:
    """Known-bad variant: evaluates |f''((x+a)/2)| on both sides of x.

    Kept only so tests can show it disagrees with the midpoint closed form.
    """
    x = _full_x(iv, x)
    s = check_s(s)
    a, b = iv.a, iv.b
    left = _d2(fs, 0.5 * (x + a))
    pair = (x - a) ** 3 * left + (b - x) ** 3 * left
    return 2.0 ** ((s - 1.0) / hp.q) / (_hoelder_factor(hp) * iv.length) * pair / 2.0


# Closed forms at the distinguished points x = a, (3a+b)/4, (a+b)/2. These are
# written out independently of the general bounds above; tests check that
# both routes agree.

def midpoint_bound_sconvex_abs(fs: FunctionSpec, iv: Interval, s: float) -> float:
    s = check_s(s)
    a, b = iv.a, iv.b
    k = 8.0 * (s + 1.0) * (s + 2.0) * (s + 3.0)
    return iv.length ** 2 / k * (_d2(fs, a) + (s * s + 3.0 * s + 2.0) * _d2(fs, iv.mid) + _d2(fs, b))


def quarter_point_bound_sconvex_abs(fs: FunctionSpec, iv: Interval, s: float) -> float:
    s = check_s(s)
    a, b = iv.a, iv.b
    k = 128.0 * (s + 1.0) * (s + 2.0) * (s + 3.0)
    inner = _d2(fs, (3.0 * a + b) / 4.0) + _d2(fs, (a + 3.0 * b) / 4.0)
    return iv.length ** 2 / k * (2.0 * _d2(fs, a) + (3.0 * s * s + 5.0 * s + 6.0) * inner + 2.0 * _d2(fs, b))


def midpoint_bound_sconvex_power(fs: FunctionSpec, iv: Interval, s: float, hp: HoelderPair) -> float:
    s = check_s(s)
    q = hp.q
    fa, fm, fb = (_d2(fs, t) ** q for t in (iv.a, iv.mid, iv.b))
    coef = iv.length ** 2 / ((s + 1.0) ** (1.0 / q) * _hoelder_factor(hp) * 16.0)
    return coef * ((fa + fm) ** (1.0 / q) + (fm + fb) ** (1.0 / q))


def quarter_point_bound_sconvex_power(fs: FunctionSpec, iv: Interval, s: float, hp: HoelderPair) -> float:
    s = check_s(s)
    a, b, q = iv.a, iv.b, hp.q
    fa, fl, fr, fb = (_d2(fs, t) ** q for t in (a, (3.0 * a + b) / 4.0, (a + 3.0 * b) / 4.0, b))
    coef = iv.length ** 2 / (128.0 * _hoelder_factor(hp) * (s + 1.0) ** (1.0 / q))
    return coef * ((fa + fl) ** (1.0 / q) + 2.0 * (fl + fr) ** (1.0 / q) + (fr + fb) ** (1.0 / q))


def trapezoid_bound_sconvex_power(fs: FunctionSpec, iv: Interval, s: float, hp: HoelderPair) -> float:
    """Bound at x = a. Pairs with the companion deviation at x = a, which
    keeps the (b-a)/8 [f'(a) - f'(b)] term; the plain trapezoid error is
    covered only when f'(a) = f'(b)."""
    s = check_s(s)
    q = hp.q
    coef = iv.length ** 2 / (8.0 * _hoelder_factor(hp) * (s + 1.0) ** (1.0 / q))
    return coef * (_d2(fs, iv.a) ** q + _d2(fs, iv.b) ** q) ** (1.0 / q)


def quarter_point_bound_sconcave_power(fs: FunctionSpec, iv: Interval, s: float, hp: HoelderPair) -> float:
    s = check_s(s)
    a, b = iv.a, iv.b
    coef = 2.0 ** ((s - 1.0) / hp.q) * iv.length ** 2 / (128.0 * _hoelder_factor(hp))
    return coef * (_d2(fs, (7.0 * a + b) / 8.0) + 2.0 * _d2(fs, iv.mid) + _d2(fs, (a + 7.0 * b) / 8.0))


def midpoint_bound_sconcave_power(fs: FunctionSpec, iv: Interval, s: float, hp: HoelderPair) -> float:
    s = check_s(s)
    a, b = iv.a, iv.b
    coef = 2.0 ** ((s - 1.0) / hp.q) * iv.length ** 2 / (16.0 * _hoelder_factor(hp))
    return coef * (_d2(fs, (3.0 * a + b) / 4.0) + _d2(fs, (a + 3.0 * b) / 4.0))


class HadamardTriple(NamedTuple):
    lower: float
    mean: float
    upper: float
    error: float


def hadamard_triple(fs: FunctionSpec, iv: Interval, s: float, tol: float = 1e-12) -> HadamardTriple:
    """2^(s-1) f(mid) <= mean(f) <= (f(a) + f(b))/(s+1) for s-convex f >= 0."""
    s = check_s(s)
    mean = integral_mean(fs, iv, tol)
    lower = 2.0 ** (s - 1.0) * float(fs.f(iv.mid))
    upper = (float(fs.f(iv.a)) + float(fs.f(iv.b))) / (s + 1.0)
    return HadamardTriple(lower, mean.value, upper, mean.error)


def classical_ostrowski_bound(M: float, iv: Interval, x: float) -> float:
    if M < 0:
        raise InvalidParameter(f"derivative bound M must be nonnegative, got {M}")
    x = _full_x(iv, x)
    return M * iv.length * (0.25 + (x - iv.mid) ** 2 / iv.length ** 2)


def sup_abs_derivative(fs: FunctionSpec, iv: Interval, points: int = 1025) -> float:
    """sup |f'| on the interval: dense sampling refined by bounded Brent."""
    t = np.linspace(iv.a, iv.b, points)
    vals = np.abs(np.asarray(fs.f1(t), dtype=float) + 0.0 * t)
    i = int(np.argmax(vals))
    best = float(vals[i])
    lo, hi = t[max(i - 1, 0)], t[min(i + 1, points - 1)]
    if hi > lo:
        res = minimize_scalar(lambda u: -abs(float(fs.f1(u))), bounds=(lo, hi), method="bounded",
                              options={"xatol": 1e-12 * iv.length})
        best = max(best, -float(res.fun))
    return best
