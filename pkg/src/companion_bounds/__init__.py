"""Numerical verification of companion-of-Ostrowski inequalities for
s-convex and s-concave curvature."""

from .core import EvaluationResult, Estimate, HoelderPair, Interval, Verdict
from .errors import DomainError, HypothesisViolated, InvalidParameter, NumericalFailure, UnknownFunction
from .funcat import (ConvexityReport, FunctionSpec, check_s_concavity, check_s_convexity, estimate_max_s,
                     resolve)
from .quadrature import QuadratureResult, integrate
from .sweep import InequalityCase, SweepConfig, SweepReport, evaluate_case, run_sweep

__all__ = [
    "ConvexityReport", "DomainError", "Estimate", "EvaluationResult", "FunctionSpec", "HoelderPair",
    "HypothesisViolated", "InequalityCase", "Interval", "InvalidParameter", "NumericalFailure",
    "QuadratureResult", "SweepConfig", "SweepReport", "UnknownFunction", "Verdict", "check_s_concavity",
    "check_s_convexity", "estimate_max_s", "evaluate_case", "integrate", "resolve", "run_sweep",
]
__version__ = "0.1.0"
