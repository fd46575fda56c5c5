"""Grid sweeps: certify each case's hypothesis, then evaluate its bound."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import companions as cp
from . import means
from .core import Estimate, EvaluationResult, HoelderPair, Interval, Verdict, sum_with_error
from .errors import DomainError, InvalidParameter, NumericalFailure, UnknownFunction
from .funcat import (DEFAULT_CATALOG, DEFAULT_SAMPLES, check_s_concavity, check_s_convexity,
                     curvature_power, resolve)


@dataclass(frozen=True)
class CaseKind:
    x_range: Optional[str]   # "companion" -> [a, mid]; "full" -> [a, b]; None -> no x
    needs_q: bool
    target: Optional[str]    # "f", "curvature" or None
    concave: bool = False
    fixed_x: Optional[str] = None


THEOREMS = {
    "thm2.1": CaseKind("companion", False, "curvature"),
    "thm2.2": CaseKind("companion", True, "curvature"),
    "thm2.3": CaseKind("companion", True, "curvature", concave=True),
    "thm1.2": CaseKind("full", True, "curvature", concave=True),
    "cor2.3.1": CaseKind(None, False, "curvature", fixed_x="mid"),
    "cor2.3.2": CaseKind(None, False, "curvature", fixed_x="quarter"),
    "cor2.7.1": CaseKind(None, True, "curvature", fixed_x="mid"),
    "cor2.7.2": CaseKind(None, True, "curvature", fixed_x="quarter"),
    "cor2.8": CaseKind(None, True, "curvature", fixed_x="a"),
    "cor2.11": CaseKind(None, True, "curvature", concave=True, fixed_x="quarter"),
    "cor1.1": CaseKind(None, True, "curvature", concave=True, fixed_x="mid"),
    "hadamard": CaseKind(None, False, "f"),
    "ostrowski_classical": CaseKind("full", False, None),
    "prop3.1a": CaseKind(None, False, "curvature"),
    "prop3.1b": CaseKind(None, False, "curvature"),
    "prop3.2": CaseKind(None, True, "curvature"),
    "prop3.3": CaseKind(None, True, "curvature"),
    "prop3.3c": CaseKind(None, True, "curvature"),
}

DEFAULT_THEOREMS = (
    "thm2.1", "thm2.2", "thm2.3", "thm1.2",
    "cor2.3.1", "cor2.3.2", "cor2.7.1", "cor2.7.2", "cor2.8", "cor2.11", "cor1.1",
    "hadamard", "ostrowski_classical",
)
DEFAULT_INTERVALS = (Interval(0.5, 1.5), Interval(1.0, 2.0), Interval(1.0, 4.0))
DEFAULT_S = (0.25, 0.5, 0.75, 1.0)
DEFAULT_Q = (1.5, 2.0, 3.0)


def fixed_point(iv: Interval, where: str) -> float:
    return {"a": iv.a, "mid": iv.mid, "quarter": (3.0 * iv.a + iv.b) / 4.0}[where]


@dataclass(frozen=True)
class InequalityCase:
    theorem_id: str
    function_name: str
    interval: Interval
    x: Optional[float] = None
    s: float = 1.0
    q: Optional[float] = None

    def __post_init__(self):
        kind = THEOREMS.get(self.theorem_id)
        if kind is None:
            raise InvalidParameter(f"unknown theorem id {self.theorem_id!r}")
        if (self.x is not None) != (kind.x_range is not None):
            raise InvalidParameter(f"{self.theorem_id} {'needs' if kind.x_range else 'takes no'} x")
        if (self.q is not None) != kind.needs_q:
            raise InvalidParameter(f"{self.theorem_id} {'needs' if kind.needs_q else 'takes no'} q")


@dataclass
class SweepConfig:
    theorems: tuple = DEFAULT_THEOREMS
    functions: tuple = DEFAULT_CATALOG
    intervals: tuple = DEFAULT_INTERVALS
    x_count: int = 9
    s_values: tuple = DEFAULT_S
    q_values: tuple = DEFAULT_Q
    seed: int = 0
    n_samples: int = DEFAULT_SAMPLES
    rel_tol: float = 1e-9
    quad_tol: float = 1e-11
    name: str = "sweep"

    def __post_init__(self):
        for tid in self.theorems:
            if tid not in THEOREMS:
                raise InvalidParameter(f"unknown theorem id {tid!r}")
        for fn in self.functions:
            resolve(fn)
        if self.x_count < 1:
            raise InvalidParameter("x_count must be at least 1")
        if not self.s_values:
            raise InvalidParameter("s grid is empty")
        if any(THEOREMS[t].needs_q for t in self.theorems) and not self.q_values:
            raise InvalidParameter("q grid is empty but a Hoelder-type case was requested")

    def cases(self) -> list:
        """Expand the grid in a fixed order: theorem, function, interval, x, s, q."""
        out = []
        for tid in self.theorems:
            kind = THEOREMS[tid]
            qs = tuple(self.q_values) if kind.needs_q else (None,)
            if tid.startswith("prop"):
                if not self.functions:
                    continue
                for iv in self.intervals:
                    for s in self.s_values:
                        if not 0 < s < 1 or iv.a <= 0:
                            continue
                        for q in qs:
                            out.append(InequalityCase(tid, f"pow:{s:g}", iv, None, s, q))
                continue
            for fn in self.functions:
                for iv in self.intervals:
                    if kind.x_range == "companion":
                        xs = np.linspace(iv.a, iv.mid, self.x_count)
                    elif kind.x_range == "full":
                        xs = np.linspace(iv.a, iv.b, self.x_count)
                    else:
                        xs = (None,)
                    for x in xs:
                        for s in self.s_values:
                            for q in qs:
                                out.append(InequalityCase(tid, fn, iv, None if x is None else float(x), float(s),
                                                          None if q is None else float(q)))
        return out


class Evaluator:
    """Evaluates cases, caching integral means and certifications."""

    def __init__(self, n_samples: int = DEFAULT_SAMPLES, seed: int = 0, rel_tol: float = 1e-9,
                 quad_tol: float = 1e-11):
        self.n_samples = n_samples
        self.seed = seed
        self.rel_tol = rel_tol
        self.quad_tol = quad_tol
        self._means = {}
        self._certs = {}

    @classmethod
    def for_config(cls, cfg: SweepConfig) -> "Evaluator":
        return cls(cfg.n_samples, cfg.seed, cfg.rel_tol, cfg.quad_tol)

    def mean(self, name: str, iv: Interval):
        key = (name, iv)
        if key not in self._means:
            self._means[key] = cp.integral_mean(resolve(name), iv, self.quad_tol)
        return self._means[key]

    def certify(self, name: str, iv: Interval, target: str, concave: bool, s: float, q: float) -> bool:
        key = (name, iv, target, concave, s, q)
        if key not in self._certs:
            fs = resolve(name)
            subject = fs if target == "f" else curvature_power(fs, q)
            check = check_s_concavity if concave else check_s_convexity
            ok = check(subject, iv, s, self.n_samples, self.seed).passed
            if ok and target == "f":
                # the Hermite-Hadamard chain also needs f >= 0
                ok = bool(np.all(np.asarray(fs.f(np.linspace(iv.a, iv.b, 257)), dtype=float) >= 0))
            self._certs[key] = ok
        return self._certs[key]

    def evaluate(self, case: InequalityCase) -> EvaluationResult:
        kind = THEOREMS[case.theorem_id]
        certified = False
        try:
            if kind.target is None:
                certified = True
            else:
                certified = self.certify(case.function_name, case.interval, kind.target, kind.concave,
                                         case.s, case.q if case.q is not None else 1.0)
            return self._evaluate(case, kind, certified)
        except (NumericalFailure, DomainError, InvalidParameter, UnknownFunction) as exc:
            return EvaluationResult.failure(f"{type(exc).__name__}: {exc}", certified)

    def _evaluate(self, case, kind, certified) -> EvaluationResult:
        tid = case.theorem_id
        iv = case.interval
        s = case.s
        hp = HoelderPair.from_q(case.q) if case.q is not None else None
        judge = lambda lhs, rhs, err, **kw: EvaluationResult.judge(lhs, rhs, err, certified, self.rel_tol, **kw)

        if tid.startswith("prop"):
            pid = tid[4:]
            lhs = means.proposition_lhs(pid, iv.a, iv.b, s)
            rhs = means.proposition_rhs(pid, iv.a, iv.b, s, case.q)
            return judge(lhs, rhs, 0.0)

        fs = resolve(case.function_name)
        # the Hadamard chain only evaluates f; everything else needs f''
        floor = fs.value_domain_min if tid == "hadamard" else fs.domain_min
        if iv.a < floor:
            raise DomainError(f"{fs.name} needs a >= {floor:g}")

        if tid == "hadamard":
            tri = cp.hadamard_triple(fs, iv, s, min(self.quad_tol, 1e-12))
            slack = min(tri.upper - tri.mean, tri.mean - tri.lower)
            return judge(tri.mean, tri.upper, tri.error, slack=slack)

        mean = self.mean(case.function_name, iv)
        if tid == "ostrowski_classical":
            lhs = float(fs.f(case.x)) - mean.value
            M = cp.sup_abs_derivative(fs, iv)
            return judge(lhs, cp.classical_ostrowski_bound(M, iv, case.x), mean.error)

        if tid in ("thm1.2", "cor1.1"):
            x = case.x if tid == "thm1.2" else iv.mid
            lhs = _set_lhs(fs, iv, x, mean)
            if tid == "thm1.2":
                rhs = cp.bound_thm12(fs, iv, x, s, hp)
            else:
                rhs = cp.midpoint_bound_sconcave_power(fs, iv, s, hp)
            return judge(lhs.value, rhs, lhs.error)

        x = case.x if kind.fixed_x is None else fixed_point(iv, kind.fixed_x)
        dev = cp.companion_deviation(fs, iv, x, mean=mean)
        rhs = {
            "thm2.1": lambda: cp.bound_sconvex_abs(fs, iv, x, s),
            "thm2.2": lambda: cp.bound_sconvex_power(fs, iv, x, s, hp),
            "thm2.3": lambda: cp.bound_sconcave_power(fs, iv, x, s, hp),
            "cor2.3.1": lambda: cp.midpoint_bound_sconvex_abs(fs, iv, s),
            "cor2.3.2": lambda: cp.quarter_point_bound_sconvex_abs(fs, iv, s),
            "cor2.7.1": lambda: cp.midpoint_bound_sconvex_power(fs, iv, s, hp),
            "cor2.7.2": lambda: cp.quarter_point_bound_sconvex_power(fs, iv, s, hp),
            "cor2.8": lambda: cp.trapezoid_bound_sconvex_power(fs, iv, s, hp),
            "cor2.11": lambda: cp.quarter_point_bound_sconcave_power(fs, iv, s, hp),
        }[tid]()
        return judge(dev.value, rhs, dev.error)


def _set_lhs(fs, iv, x, mean) -> Estimate:
    # lhs only; a bound check does not need the curvature integrals
    est = sum_with_error([mean.value, -float(fs.f(x)), (x - iv.mid) * float(fs.f1(x))])
    return Estimate(est.value, est.error + mean.error)


def evaluate_case(case: InequalityCase, evaluator: Evaluator | None = None) -> EvaluationResult:
    return (evaluator or Evaluator()).evaluate(case)


@dataclass
class SweepReport:
    records: list = field(default_factory=list)   # (InequalityCase, EvaluationResult) pairs

    @property
    def total(self) -> int:
        return len(self.records)

    def count(self, verdict: Verdict) -> int:
        return sum(1 for _, r in self.records if r.verdict == verdict)

    @property
    def counts(self) -> dict:
        return {v.value: self.count(v) for v in Verdict}

    @property
    def min_slack_case(self):
        """Smallest-slack record among asserted bounds (holds or violated)."""
        best = None
        for rec in self.records:
            r = rec[1]
            if r.verdict in (Verdict.HOLDS, Verdict.VIOLATED) and math.isfinite(r.slack):
                if best is None or r.slack < best[1].slack:
                    best = rec
        if best is None and self.records:
            finite = [rec for rec in self.records if math.isfinite(rec[1].slack)]
            best = min(finite, key=lambda rec: rec[1].slack) if finite else self.records[0]
        return best

    def extend(self, other: "SweepReport") -> "SweepReport":
        return SweepReport(self.records + other.records)


_worker_eval = None


def _init_worker(n_samples, seed, rel_tol, quad_tol):
    global _worker_eval
    _worker_eval = Evaluator(n_samples, seed, rel_tol, quad_tol)


def _work(case):
    return _worker_eval.evaluate(case)


def run_sweep(cfg: SweepConfig, workers: int = 1) -> SweepReport:
    """Evaluate every case in ``cfg``; results keep grid order regardless of ``workers``."""
    cases = cfg.cases()
    if workers <= 1 or len(cases) < 2:
        ev = Evaluator.for_config(cfg)
        results = [ev.evaluate(c) for c in cases]
    else:
        chunk = max(1, len(cases) // (workers * 8))
        with ProcessPoolExecutor(workers, initializer=_init_worker,
                                 initargs=(cfg.n_samples, cfg.seed, cfg.rel_tol, cfg.quad_tol)) as pool:
            results = list(pool.map(_work, cases, chunksize=chunk))
    return SweepReport(list(zip(cases, results)))
