"""Test-function catalog and numerical s-convexity certification.

Catalog names are small strings so they can travel through config files
and the command line:

========================  ===========================================
``pow:R``                 x**R for any real R
``poly:c0,c1,...,c4``     c0 + c1 x + ... (degree at most 4)
``exp`` / ``exp:K``       exp(K x), K defaults to 1
``const:C``               the constant C
``neg:<name>``            negation of another entry
``shift:C:<name>``        another entry plus the constant C
========================  ===========================================

A function ``f`` is s-convex in the second sense on ``[a, b]`` when
``f(al*x + be*y) <= al**s f(x) + be**s f(y)`` for all ``x, y`` in the
interval and ``al + be = 1``; s-concavity reverses the inequality. The
certifier evaluates that inequality on a fixed grid plus seeded random
triples and reports the worst excess.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Optional

import numpy as np

from .core import Interval, check_s
from .errors import DomainError, HypothesisViolated, InvalidParameter, UnknownFunction

POSITIVE_FLOOR = 1e-6
CERT_TOL = 1e-9
GRID_POINTS = 32
GRID_WEIGHTS = 17
DEFAULT_SAMPLES = 256

# Shipped catalog used by default sweeps: convex, s-convex-only, concave,
# constant-curvature and sign-changing curvature cases.
DEFAULT_CATALOG = (
    "pow:1", "pow:2", "pow:3", "pow:4", "pow:5",
    "pow:0.25", "pow:0.5", "pow:0.75", "pow:1.5", "pow:2.5", "pow:3.5",
    "pow:-0.5", "pow:-1", "pow:-2",
    "poly:1,-1,1", "poly:0,1,0,-1", "poly:1,0,-2,0,1", "poly:2,1,0.5,0.25", "poly:0,0,1,1",
    "exp", "exp:-1", "exp:0.5", "exp:2",
    "neg:pow:2", "neg:pow:3", "neg:pow:0.5", "neg:exp",
    "shift:2:pow:0.5", "shift:-1:pow:2",
    "const:3",
)


@dataclass(frozen=True)
class FunctionSpec:
    """A scalar function with its first two derivatives.

    ``domain_min`` is the smallest admissible left endpoint for all three
    callables; ``value_domain_min`` is the same for ``f`` alone (``x**0.5``
    is finite at 0 even though its curvature is not). Derived specs built by
    :func:`curvature_power` carry no derivatives.
    """

    name: str
    f: Callable
    f1: Optional[Callable] = field(default=None, compare=False)
    f2: Optional[Callable] = field(default=None, compare=False)
    domain_min: float = -math.inf
    value_domain_min: float = -math.inf
    symmetry_center: Optional[float] = None


def make_power_function(r: float) -> FunctionSpec:
    r = float(r)
    if not math.isfinite(r):
        raise InvalidParameter(f"exponent must be finite, got {r}")
    if r == 0.0:
        return _constant(1.0, name="pow:0")
    smooth = r >= 2 or r == 1.0
    c1 = r
    c2 = r * (r - 1.0)
    return FunctionSpec(
        name=f"pow:{r:g}",
        f=lambda x: np.power(x, r),
        f1=lambda x: c1 * np.power(x, r - 1.0),
        f2=(lambda x: c2 * np.power(x, r - 2.0)) if c2 != 0.0 else (lambda x: 0.0 * np.asarray(x, dtype=float)),
        domain_min=0.0 if smooth else POSITIVE_FLOOR,
        value_domain_min=0.0 if r > 0 else POSITIVE_FLOOR,
    )


def make_polynomial(coeffs) -> FunctionSpec:
    coeffs = [float(c) for c in coeffs]
    if not 1 <= len(coeffs) <= 5:
        raise InvalidParameter("polynomials take between 1 and 5 coefficients (degree <= 4)")
    p = np.polynomial.Polynomial(coeffs)
    d1 = p.deriv(1)
    d2 = p.deriv(2)
    even = all(c == 0.0 for c in coeffs[1::2])
    return FunctionSpec(
        name="poly:" + ",".join(f"{c:g}" for c in coeffs),
        f=p, f1=d1, f2=d2,
        symmetry_center=0.0 if even else None,
    )


def _constant(c: float, name: str | None = None) -> FunctionSpec:
    zero = lambda x: 0.0 * np.asarray(x, dtype=float)
    return FunctionSpec(
        name=name or f"const:{c:g}",
        f=lambda x: c + zero(x),
        f1=zero, f2=zero,
    )


def make_exponential(k: float = 1.0) -> FunctionSpec:
    k = float(k)
    return FunctionSpec(
        name="exp" if k == 1.0 else f"exp:{k:g}",
        f=lambda x: np.exp(k * x),
        f1=lambda x: k * np.exp(k * x),
        f2=lambda x: k * k * np.exp(k * x),
    )


def negate(fs: FunctionSpec) -> FunctionSpec:
    return FunctionSpec(
        name=f"neg:{fs.name}",
        f=lambda x: -fs.f(x),
        f1=lambda x: -fs.f1(x),
        f2=lambda x: -fs.f2(x),
        domain_min=fs.domain_min,
        value_domain_min=fs.value_domain_min,
        symmetry_center=fs.symmetry_center,
    )


def shift(fs: FunctionSpec, c: float) -> FunctionSpec:
    c = float(c)
    return FunctionSpec(
        name=f"shift:{c:g}:{fs.name}",
        f=lambda x: fs.f(x) + c,
        f1=fs.f1,
        f2=fs.f2,
        domain_min=fs.domain_min,
        value_domain_min=fs.value_domain_min,
        symmetry_center=fs.symmetry_center,
    )


def curvature_power(fs: FunctionSpec, q: float = 1.0) -> FunctionSpec:
    """The derived function ``|f''|**q``, used as a certification target."""
    f2 = fs.f2
    q = float(q)
    return FunctionSpec(
        name=f"|{fs.name}''|^{q:g}",
        f=lambda x: np.power(np.abs(f2(x)), q),
        domain_min=fs.domain_min,
        value_domain_min=fs.domain_min,
    )


def _number(text: str, name: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise UnknownFunction(f"bad number {text!r} in function name {name!r}") from None


@lru_cache(maxsize=None)
def resolve(name: str) -> FunctionSpec:
    """Look up a catalog entry by name (see the module docstring)."""
    name = name.strip()
    head, _, rest = name.partition(":")
    if head == "pow" and rest:
        return make_power_function(_number(rest, name))
    if head == "poly" and rest:
        return make_polynomial(_number(c, name) for c in rest.split(","))
    if head == "exp":
        return make_exponential(_number(rest, name) if rest else 1.0)
    if head == "const" and rest:
        return _constant(_number(rest, name))
    if head == "neg" and rest:
        return negate(resolve(rest))
    if head == "shift" and rest:
        c, _, inner = rest.partition(":")
        if inner:
            return shift(resolve(inner), _number(c, name))
    raise UnknownFunction(f"unknown catalog function {name!r}")


@dataclass(frozen=True)
class ConvexityReport:
    class_tested: str
    s: float
    samples: int
    max_violation: float
    tolerance: float
    witness: Optional[tuple] = None

    @property
    def passed(self) -> bool:
        return self.max_violation <= self.tolerance

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"


@lru_cache(maxsize=64)
def _sample_triples(a: float, b: float, n_samples: int, seed: int):
    grid = np.linspace(a, b, GRID_POINTS)
    alphas = np.linspace(0.0, 1.0, GRID_WEIGHTS)
    gx, gy, ga = np.meshgrid(grid, grid, alphas, indexing="ij")
    rng = np.random.default_rng(seed)
    rx = rng.uniform(a, b, n_samples)
    ry = rng.uniform(a, b, n_samples)
    ra = rng.uniform(0.0, 1.0, n_samples)
    x = np.concatenate([gx.ravel(), rx])
    y = np.concatenate([gy.ravel(), ry])
    al = np.concatenate([ga.ravel(), ra])
    for arr in (x, y, al):
        arr.flags.writeable = False
    return x, y, al


def _target(fs) -> tuple[Callable, float]:
    if isinstance(fs, FunctionSpec):
        return fs.f, fs.value_domain_min
    return fs, -math.inf


def _scan(fs, iv: Interval, s: float, n_samples: int, seed: int, concave: bool) -> ConvexityReport:
    s = check_s(s)
    if n_samples < 1:
        raise InvalidParameter("n_samples must be at least 1")
    f, lowest = _target(fs)
    if iv.a < lowest:
        raise DomainError(f"interval {iv} starts below the function domain ({lowest:g})")
    x, y, al = _sample_triples(iv.a, iv.b, int(n_samples), int(seed))
    be = 1.0 - al
    with np.errstate(all="ignore"):
        fx = np.asarray(f(x), dtype=float)
        fy = np.asarray(f(y), dtype=float)
        fz = np.asarray(f(al * x + be * y), dtype=float)
        combo = np.power(al, s) * fx + np.power(be, s) * fy
    if not (np.all(np.isfinite(fx)) and np.all(np.isfinite(fy)) and np.all(np.isfinite(fz))):
        raise DomainError(f"function is not finite on {iv}")
    excess = combo - fz if concave else fz - combo
    worst = int(np.argmax(excess))
    scale = float(max(np.max(np.abs(fx)), np.max(np.abs(fy)), np.max(np.abs(fz))))
    tol = CERT_TOL * (1.0 + scale)
    max_violation = float(excess[worst])
    witness = None
    if max_violation > tol:
        witness = (float(x[worst]), float(y[worst]), float(al[worst]))
    return ConvexityReport(
        class_tested="s-concave" if concave else "s-convex",
        s=s,
        samples=int(x.size),
        max_violation=max_violation,
        tolerance=tol,
        witness=witness,
    )


def check_s_convexity(fs, iv: Interval, s: float, n_samples: int = DEFAULT_SAMPLES, seed: int = 0) -> ConvexityReport:
    """Certify ``fs`` as s-convex in the second sense on ``iv``.

    ``fs`` may be a :class:`FunctionSpec` (its ``f`` is tested) or a bare
    vectorised callable.
    """
    return _scan(fs, iv, s, n_samples, seed, concave=False)


def check_s_concavity(fs, iv: Interval, s: float, n_samples: int = DEFAULT_SAMPLES, seed: int = 0) -> ConvexityReport:
    return _scan(fs, iv, s, n_samples, seed, concave=True)


def estimate_max_s(fs, iv: Interval, n_samples: int = DEFAULT_SAMPLES, seed: int = 0, resolution: float = 1e-4) -> float:
    """Largest s in (0, 1] for which the certifier accepts ``fs`` on ``iv``.

    Requires ``fs`` nonnegative on the sample set; for such functions the
    class shrinks as s grows, so bisection applies. Returns 0.0 if even a
    vanishing s is rejected.
    """
    f, _ = _target(fs)
    x, _, _ = _sample_triples(iv.a, iv.b, int(n_samples), int(seed))
    with np.errstate(all="ignore"):
        values = np.asarray(f(x), dtype=float)
    if np.any(values < 0):
        raise HypothesisViolated(f"function takes negative values on {iv}; s-classes are not nested")

    def ok(s):
        return check_s_convexity(fs, iv, s, n_samples, seed).passed

    if ok(1.0):
        return 1.0
    lo, hi = resolution, 1.0
    if not ok(lo):
        return 0.0
    while hi - lo > resolution:
        mid = 0.5 * (lo + hi)
        if ok(mid):
            lo = mid
        else:
            hi = mid
    return lo
