import math

import numpy as np
import pytest

from companion_bounds import companions as cp
from companion_bounds.core import HoelderPair, Interval
from companion_bounds.errors import InvalidParameter
from companion_bounds.funcat import DEFAULT_CATALOG, check_s_concavity, check_s_convexity, curvature_power, resolve

UNIT = Interval(0.0, 1.0)
SQ = resolve("pow:2")
CUBE = resolve("pow:3")
Q2 = HoelderPair.from_q(2.0)


class TestDeviationOracles:
    # f = t^2 on [0,1]: mean 1/3
    def test_square_quarter_point(self):
        # 1/3 - (1/16 + 9/16)/2, correction term vanishes at the quarter point
        assert cp.companion_deviation(SQ, UNIT, 0.25).value == pytest.approx(1 / 48, abs=1e-14)

    def test_square_midpoint(self):
        assert cp.companion_deviation(SQ, UNIT, 0.5).value == pytest.approx(1 / 12, abs=1e-14)

    def test_cube_quarter_point(self):
        # 1/4 - (1/64 + 27/64)/2
        assert cp.companion_deviation(CUBE, UNIT, 0.25).value == pytest.approx(1 / 32, abs=1e-14)
        assert cp.liu_identity_rhs(CUBE, UNIT, 0.25).value == pytest.approx(1 / 32, abs=1e-14)

    def test_set_pair_square(self):
        # 1/3 - 1/16 - (1/4)(1/2)
        lhs, rhs = cp.set_identity_pair(SQ, UNIT, 0.25)
        assert lhs.value == pytest.approx(7 / 48, abs=1e-14)
        assert rhs.value == pytest.approx(7 / 48, abs=1e-14)

    def test_set_pair_cube_midpoint(self):
        lhs, rhs = cp.set_identity_pair(CUBE, UNIT, 0.5)
        assert lhs.value == pytest.approx(1 / 8, abs=1e-14)
        assert rhs.value == pytest.approx(1 / 8, abs=1e-14)

    def test_x_outside_range(self):
        with pytest.raises(InvalidParameter):
            cp.companion_deviation(SQ, UNIT, 0.75)
        with pytest.raises(InvalidParameter):
            cp.set_identity_pair(SQ, UNIT, 1.5)


class TestIdentities:
    @pytest.mark.parametrize("name", DEFAULT_CATALOG)
    @pytest.mark.parametrize("form", cp.IDENTITY_FORMS)
    def test_catalog(self, name, form):
        fs = resolve(name)
        iv = Interval(max(fs.domain_min, 0.5), max(fs.domain_min, 0.5) + 1.5)
        hi = iv.mid if form == "companion" else iv.b
        for x in np.linspace(iv.a, hi, 7):
            chk = cp.identity_check(fs, iv, x, form)
            assert chk.passed, (name, x, chk)

    @pytest.mark.parametrize("x", [0.0, 0.5])
    def test_degenerate_pieces(self, x):
        # x = a drops the outer pieces, x = mid drops the central one
        chk = cp.identity_check(resolve("exp"), UNIT, x)
        assert chk.passed and chk.residual <= 1e-13

    @pytest.mark.parametrize("x", [0.0, 0.5, 1.0])
    def test_one_point_at_ends_and_middle(self, x):
        assert cp.identity_check(resolve("poly:1,0,-2,0,1"), Interval(-1, 2), x, "one-point").passed

    def test_unknown_form(self):
        with pytest.raises(InvalidParameter):
            cp.identity_check(SQ, UNIT, 0.25, "three-point")


class TestBoundOracles:
    def test_sconvex_abs_equality_for_square(self):
        assert cp.bound_sconvex_abs(SQ, UNIT, 0.25, 1.0) == pytest.approx(1 / 48, rel=1e-14)
        assert cp.bound_sconvex_abs(SQ, UNIT, 0.5, 1.0) == pytest.approx(1 / 12, rel=1e-14)

    def test_hoelder_closed_forms_for_square(self):
        # |f''|^2 = 4 everywhere, (2p+1)^(1/p) = sqrt 5, (s+1)^(1/q) = sqrt 2
        r5 = math.sqrt(5)
        assert cp.midpoint_bound_sconvex_power(SQ, UNIT, 1.0, Q2) == pytest.approx(1 / (4 * r5), rel=1e-14)
        assert cp.quarter_point_bound_sconvex_power(SQ, UNIT, 1.0, Q2) == pytest.approx(1 / (16 * r5), rel=1e-14)
        assert cp.trapezoid_bound_sconvex_power(SQ, UNIT, 1.0, Q2) == pytest.approx(1 / (4 * r5), rel=1e-14)
        assert cp.midpoint_bound_sconcave_power(SQ, UNIT, 1.0, Q2) == pytest.approx(1 / (4 * r5), rel=1e-14)
        assert cp.quarter_point_bound_sconcave_power(SQ, UNIT, 1.0, Q2) == pytest.approx(1 / (16 * r5), rel=1e-14)

    def test_trapezoid_bound_pairs_with_derivative_term(self):
        # plain trapezoid error of t^2 is 1/6, above the bound; the deviation at x = a is 1/12
        bound = cp.trapezoid_bound_sconvex_power(SQ, UNIT, 1.0, Q2)
        assert 1 / 6 > bound
        dev = cp.companion_deviation(SQ, UNIT, 0.0).value
        assert dev == pytest.approx(1 / 12, abs=1e-14) and dev <= bound

    def test_hadamard_triples(self):
        tri = cp.hadamard_triple(resolve("pow:0.5"), UNIT, 0.5)
        assert (tri.lower, tri.mean, tri.upper) == pytest.approx((0.5, 2 / 3, 2 / 3), abs=1e-12)
        tri = cp.hadamard_triple(SQ, Interval(0, 2), 1.0)
        assert (tri.lower, tri.mean, tri.upper) == pytest.approx((1.0, 4 / 3, 2.0), abs=1e-12)

    def test_classical_ostrowski(self):
        assert cp.sup_abs_derivative(SQ, UNIT) == pytest.approx(2.0, abs=1e-12)
        assert cp.classical_ostrowski_bound(2.0, UNIT, 0.0) == pytest.approx(1.0)
        assert cp.classical_ostrowski_bound(2.0, UNIT, 0.5) == pytest.approx(0.5)


def _tuples(n=100, seed=11):
    rng = np.random.default_rng(seed)
    names = [n_ for n_ in DEFAULT_CATALOG if not n_.startswith("const")]
    for _ in range(n):
        fs = resolve(names[rng.integers(len(names))])
        a = max(fs.domain_min, 0.0) + rng.uniform(0.1, 2.0)
        iv = Interval(a, a + rng.uniform(0.2, 3.0))
        yield fs, iv, float(rng.uniform(0.05, 1.0)), HoelderPair.from_q(float(rng.uniform(1.1, 4.0)))


@pytest.mark.parametrize("fs,iv,s,hp", list(_tuples()))
def test_closed_forms_match_general_bounds(fs, iv, s, hp):
    quarter = (3 * iv.a + iv.b) / 4
    pairs = [
        (cp.midpoint_bound_sconvex_abs(fs, iv, s), cp.bound_sconvex_abs(fs, iv, iv.mid, s)),
        (cp.quarter_point_bound_sconvex_abs(fs, iv, s), cp.bound_sconvex_abs(fs, iv, quarter, s)),
        (cp.midpoint_bound_sconvex_power(fs, iv, s, hp), cp.bound_sconvex_power(fs, iv, iv.mid, s, hp)),
        (cp.quarter_point_bound_sconvex_power(fs, iv, s, hp), cp.bound_sconvex_power(fs, iv, quarter, s, hp)),
        (cp.trapezoid_bound_sconvex_power(fs, iv, s, hp), cp.bound_sconvex_power(fs, iv, iv.a, s, hp)),
        (cp.quarter_point_bound_sconcave_power(fs, iv, s, hp), cp.bound_sconcave_power(fs, iv, quarter, s, hp)),
        (cp.midpoint_bound_sconcave_power(fs, iv, s, hp), cp.bound_sconcave_power(fs, iv, iv.mid, s, hp)),
        (cp.midpoint_bound_sconcave_power(fs, iv, s, hp), cp.bound_thm12(fs, iv, iv.mid, s, hp)),
    ]
    for closed, general in pairs:
        assert closed == pytest.approx(general, rel=1e-12, abs=1e-300)


class TestDominance:
    @pytest.mark.parametrize("name", ["pow:2", "pow:3", "pow:4", "exp", "exp:-1", "poly:0,0,1,1", "pow:-1"])
    def test_convex_curvature(self, name):
        fs = resolve(name)
        iv = Interval(1.0, 3.0)
        assert check_s_convexity(curvature_power(fs, 1.0), iv, 1.0).passed
        for x in np.linspace(iv.a, iv.mid, 9):
            dev = abs(cp.companion_deviation(fs, iv, x).value)
            assert dev <= cp.bound_sconvex_abs(fs, iv, x, 1.0) * (1 + 1e-9) + 1e-12
            for q in (1.5, 2.0, 3.0):
                hp = HoelderPair.from_q(q)
                assert dev <= cp.bound_sconvex_power(fs, iv, x, 1.0, hp) * (1 + 1e-9) + 1e-12

    @pytest.mark.parametrize("name", ["pow:2.5", "pow:2.25", "shift:2:pow:2.1", "neg:pow:2.25"])
    def test_concave_curvature(self, name):
        # |f''|^q ~ t^(q(r-2)) is concave when q(r-2) <= 1
        fs = resolve(name)
        iv = Interval(1.0, 3.0)
        checked = 0
        for q in (1.5, 2.0, 3.0):
            if not check_s_concavity(curvature_power(fs, q), iv, 1.0).passed:
                continue
            checked += 1
            hp = HoelderPair.from_q(q)
            for x in np.linspace(iv.a, iv.mid, 9):
                dev = abs(cp.companion_deviation(fs, iv, x).value)
                assert dev <= cp.bound_sconcave_power(fs, iv, x, 1.0, hp) * (1 + 1e-9) + 1e-12
            for x in np.linspace(iv.a, iv.b, 9):
                lhs, _ = cp.set_identity_pair(fs, iv, x)
                assert abs(lhs.value) <= cp.bound_thm12(fs, iv, x, 1.0, hp) * (1 + 1e-9) + 1e-12
        assert checked >= 2

    def test_bounds_tighten_as_s_grows(self):
        # for fixed |f''| values the s-convex bound decreases in s
        vals = [cp.bound_sconvex_abs(resolve("exp"), UNIT, 0.2, s) for s in (0.25, 0.5, 0.75, 1.0)]
        assert all(u > v for u, v in zip(vals, vals[1:]))


class TestKnownBadMidpoint:
    def test_uncorrected_form_disagrees_for_asymmetric_curvature(self):
        fs = resolve("exp")
        uncorrected = cp.bound_thm12_uncorrected(fs, UNIT, 0.5, 1.0, Q2)
        closed = cp.midpoint_bound_sconcave_power(fs, UNIT, 1.0, Q2)
        assert abs(uncorrected - closed) > 1e-3 * closed

    def test_uncorrected_form_agrees_when_curvature_is_constant(self):
        assert cp.bound_thm12_uncorrected(SQ, UNIT, 0.5, 1.0, Q2) == pytest.approx(
            cp.bound_thm12(SQ, UNIT, 0.5, 1.0, Q2), rel=1e-14)
