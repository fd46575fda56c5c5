import math

import numpy as np
import pytest

from companion_bounds import companions as cp
from companion_bounds.core import HoelderPair, Interval, Verdict
from companion_bounds.errors import InvalidParameter
from companion_bounds.funcat import make_power_function
from companion_bounds.means import (PROPOSITIONS, arithmetic_mean, generalized_log_mean, proposition_lhs,
                                    proposition_rhs, proposition_rhs_uncorrected, verify_proposition)


class TestMeans:
    def test_arithmetic(self):
        assert arithmetic_mean(1, 3) == 2
        assert arithmetic_mean(2.5, 2.5) == 2.5
        assert arithmetic_mean(0, 1) == 0.5

    def test_log_mean_n1_is_arithmetic(self):
        for a, b in [(1, 2), (0.3, 7), (5, 5.0001)]:
            assert generalized_log_mean(a, b, 1) == pytest.approx(arithmetic_mean(a, b), rel=1e-13)

    def test_l2_oracle(self):
        assert generalized_log_mean(1, 2, 2) == pytest.approx(math.sqrt(7 / 3), rel=1e-14)

    def test_half_power_form(self):
        # L_s^s(1, 2) at s = 1/2 is (2^(3/2) - 1)/(3/2)
        oracle = (2 ** 1.5 - 1) / 1.5
        assert generalized_log_mean(1, 2, 0.5) ** 0.5 == pytest.approx(oracle, rel=1e-14)
        assert oracle == pytest.approx(1.2189514, abs=1e-7)

    def test_symmetric_in_arguments(self):
        assert generalized_log_mean(2, 1, 0.3) == generalized_log_mean(1, 2, 0.3)

    def test_nearly_equal_arguments(self):
        assert generalized_log_mean(1.0, 1.0 + 1e-12, 0.5) == pytest.approx(1.0, abs=1e-11)

    @pytest.mark.parametrize("n", [-1, 0])
    def test_undefined_orders(self, n):
        with pytest.raises(InvalidParameter):
            generalized_log_mean(1, 2, n)

    def test_bad_arguments(self):
        with pytest.raises(InvalidParameter):
            generalized_log_mean(0, 2, 0.5)
        with pytest.raises(InvalidParameter):
            generalized_log_mean(2, 2, 0.5)

    def test_between_arguments(self):
        rng = np.random.default_rng(5)
        for _ in range(500):
            a, b = rng.uniform(0.01, 10, 2)
            n = rng.uniform(-5, 5)
            if abs(n) < 1e-3 or abs(n + 1) < 1e-3:
                continue
            L = generalized_log_mean(a, b, n)
            assert min(a, b) * (1 - 1e-12) <= L <= max(a, b) * (1 + 1e-12)


class TestPropositionOracles:
    def test_31a(self):
        res = verify_proposition("3.1a", 1, 2, 0.5)
        lhs = abs((2 ** 1.5 - 1) / 1.5 - 1.5 ** 0.5)
        rhs = 0.25 / 105 * (1 + 3.75 * 1.5 ** -1.5 + 2 ** -1.5)
        assert res.lhs == pytest.approx(lhs, rel=1e-13)
        assert res.rhs == pytest.approx(rhs, rel=1e-13)
        assert res.lhs == pytest.approx(0.0057935, abs=1e-6)
        assert res.rhs == pytest.approx(0.0080829, abs=1e-6)
        assert res.verdict is Verdict.HOLDS

    def test_32(self):
        res = verify_proposition("3.2", 1, 2, 0.5, 2)
        rhs = 0.25 / (16 * math.sqrt(1.5) * math.sqrt(5)) * (
            math.sqrt(1 + 1.5 ** -3) + math.sqrt(1.5 ** -3 + 2 ** -3))
        assert res.rhs == pytest.approx(rhs, rel=1e-13)
        assert res.rhs == pytest.approx(0.0101990, abs=1e-6)
        assert res.lhs == pytest.approx(0.0057935, abs=1e-6)
        assert res.verdict is Verdict.HOLDS

    def test_33(self):
        res = verify_proposition("3.3", 1, 2, 0.5, 2)
        lhs = abs((2 ** 1.5 - 1) / 1.5 - (1 + math.sqrt(2)) / 2)
        rhs = 0.25 * math.sqrt(1 + 2 ** -3) / (8 * math.sqrt(1.5) * math.sqrt(5))
        assert res.lhs == pytest.approx(lhs, rel=1e-13)
        assert res.rhs == pytest.approx(rhs, rel=1e-13)
        assert res.lhs == pytest.approx(0.0118444, abs=1e-6)
        assert res.rhs == pytest.approx(0.0121031, abs=1e-6)
        assert res.verdict is Verdict.HOLDS

    def test_33_plain_trapezoid_can_fail(self):
        res = verify_proposition("3.3", 2, 2.5, 0.9, 3)
        assert res.verdict is Verdict.VIOLATED
        assert verify_proposition("3.3c", 2, 2.5, 0.9, 3).verdict is Verdict.HOLDS

    @pytest.mark.parametrize("args", [("3.1a", 2, 1, 0.5, None), ("3.1a", 1, 2, 1.0, None),
                                      ("3.1a", 0, 2, 0.5, None), ("3.2", 1, 2, 0.5, None),
                                      ("9.9", 1, 2, 0.5, None), ("3.3", 1, 2, 0.5, 1.0)])
    def test_parameter_errors(self, args):
        with pytest.raises(InvalidParameter):
            verify_proposition(*args)


GRID = [(a, b, s) for a in (0.5, 1.0, 2.0) for b in (a + 0.5, a + 1.0, 2 * a) for s in (0.2, 0.5, 0.8)]


class TestSpecialisation:
    """Each proposition is a corollary evaluated at f = x^s."""

    @pytest.mark.parametrize("a,b,s", GRID)
    def test_rhs_matches_corollaries(self, a, b, s):
        fs = make_power_function(s)
        iv = Interval(a, b)
        assert proposition_rhs("3.1a", a, b, s) == pytest.approx(cp.midpoint_bound_sconvex_abs(fs, iv, s), rel=1e-12)
        assert proposition_rhs("3.1b", a, b, s) == pytest.approx(
            cp.quarter_point_bound_sconvex_abs(fs, iv, s), rel=1e-12)
        for q in (1.5, 2.0, 3.0):
            hp = HoelderPair.from_q(q)
            assert proposition_rhs("3.2", a, b, s, q) == pytest.approx(
                cp.midpoint_bound_sconvex_power(fs, iv, s, hp), rel=1e-12)
            assert proposition_rhs("3.3", a, b, s, q) == pytest.approx(
                cp.trapezoid_bound_sconvex_power(fs, iv, s, hp), rel=1e-12)

    @pytest.mark.parametrize("a,b,s", GRID)
    def test_lhs_matches_companion_deviation(self, a, b, s):
        fs = make_power_function(s)
        iv = Interval(a, b)
        for pid, x in (("3.1a", iv.mid), ("3.1b", (3 * a + b) / 4), ("3.3c", a)):
            dev = cp.companion_deviation(fs, iv, x)
            assert proposition_lhs(pid, a, b, s) == pytest.approx(abs(dev.value), abs=1e-11)


class TestSignCoefficient:
    @pytest.mark.parametrize("pid", PROPOSITIONS)
    def test_signed_coefficient_gives_negative_bound(self, pid):
        q = 2.0 if pid in ("3.2", "3.3", "3.3c") else None
        assert proposition_rhs_uncorrected(pid, 1, 2, 0.5, q) < 0
        assert proposition_rhs(pid, 1, 2, 0.5, q) > 0
