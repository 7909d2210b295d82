"""Exact counting: enumeration, sieve oracle, fibration counts, fits."""
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hkcount.enumeration import (
    CountRequest,
    DegenerateFitError,
    _mobius_sieve,
    count_enum_projective,
    count_hk,
    count_projective_moebius,
    count_subbundle_direct,
    enum_hk_points,
    enum_projective,
    estimate_exponent,
    iroot,
    projective_norm_histogram,
    sweep,
)
from hkcount.geometry import (
    HKVariety,
    LineBundleClass,
    NotBigError,
    ProjectiveSpace,
    anticanonical,
)
from hkcount.heights import Region, height_le, region_of


class TestPrimitives:
    @given(st.integers(0, 10 ** 18), st.integers(1, 7))
    def test_iroot_is_floor_root(self, n, k):
        r = iroot(n, k)
        assert r ** k <= n < (r + 1) ** k

    def test_mobius_sieve(self):
        # mu(1..12) [DERIVED: textbook values]
        assert _mobius_sieve(12)[1:] == [1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0]

    def test_projective_line_small(self):
        # H <= 2 keeps [1:0],[0:1],[1:1],[1:-1]; H <= 3 adds [1:+-2],[2:+-1]
        assert count_enum_projective(1, 2) == 4
        assert count_enum_projective(1, 3) == 8

    def test_histogram_matches_enumeration(self):
        hist = projective_norm_histogram(2, 100)
        assert sum(hist.values()) == count_enum_projective(2, 10)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(1, 3), st.integers(1, 25))
    def test_enum_equals_moebius(self, n, B):
        assert count_enum_projective(n, B) == count_projective_moebius(n, B)

    def test_fractional_bound(self):
        # H^2 <= 9/4 keeps exactly the height-1 and sqrt(2) points
        assert count_enum_projective(1, Fraction(3, 2)) == 4

    def test_points_are_canonical_and_within_bound(self):
        pts = list(enum_projective(1, 5))
        assert len(pts) == len(set(pts)) == count_enum_projective(1, 5)
        for p in pts:
            assert sum(x * x for x in p.coords) <= 25


class TestCountHK:
    def test_regions_partition(self):
        X = HKVariety(1, 2, (1,))
        L = anticanonical(X)
        for b in (1, 3, 7, Fraction(15, 2)):
            w = count_hk(CountRequest(X, L, Fraction(b), Region.WHOLE)).count
            u = count_hk(CountRequest(X, L, Fraction(b), Region.GOOD_OPEN)).count
            f = count_hk(CountRequest(X, L, Fraction(b), Region.SUBBUNDLE_F)).count
            assert w == u + f

    def test_subbundle_reduction_equals_direct(self):
        X = HKVariety(2, 3, (1, 2))
        L = LineBundleClass(2, 5)
        for b in (1, 2, 4):
            via_reduction = count_hk(
                CountRequest(X, L, Fraction(b), Region.SUBBUNDLE_F)).count
            assert via_reduction == count_subbundle_direct(X, L, Fraction(b))

    def test_fast_count_equals_streaming(self):
        X = HKVariety(1, 2, (1,))
        for L in (LineBundleClass(1, 1), LineBundleClass(2, 3),
                  LineBundleClass(3, 1)):
            for b in (2, 6):
                fast = count_hk(CountRequest(X, L, Fraction(b),
                                             Region.GOOD_OPEN)).count
                slow = sum(1 for _ in enum_hk_points(X, L, b, Region.GOOD_OPEN))
                assert fast == slow

    def test_streamed_points_satisfy_bound_and_region(self):
        X = HKVariety(2, 2, (0, 1))
        L = anticanonical(X)
        pts = list(enum_hk_points(X, L, 4, Region.GOOD_OPEN))
        assert len(pts) == len(set(pts))
        for p in pts:
            assert height_le(X, L, p, Fraction(4))
            assert region_of(p) is Region.GOOD_OPEN

    def test_projective_space_request(self):
        # twisted O(k) on P^n counts N(P^n, B^{1/k})
        res = count_hk(CountRequest(ProjectiveSpace(1), 2, Fraction(9)))
        assert res.count == count_enum_projective(1, 3)

    def test_non_big_twist_raises(self):
        with pytest.raises(NotBigError):
            count_hk(CountRequest(ProjectiveSpace(1), 0, Fraction(10)))
        X = HKVariety(1, 2, (1,))
        with pytest.raises(NotBigError):
            count_hk(CountRequest(X, LineBundleClass(1, 1), Fraction(10),
                                  Region.SUBBUNDLE_F))

    def test_thread_determinism(self):
        X = HKVariety(1, 2, (1,))
        L = LineBundleClass(1, 1)
        counts = {count_hk(CountRequest(X, L, Fraction(40), Region.GOOD_OPEN,
                                        threads=k)).count for k in (1, 2, 4)}
        assert len(counts) == 1


class TestSweepAndFit:
    def test_sweep_rows(self):
        X = HKVariety(1, 2, (1,))
        req = CountRequest(X, LineBundleClass(1, 1), Fraction(5),
                           Region.GOOD_OPEN)
        rows = sweep(req, [5, 10, 20])
        assert [r["B"] for r in rows] == [5, 10, 20]
        counts = [r["count"] for r in rows]
        assert counts == sorted(counts)

    def test_sweep_rejects_non_increasing_grid(self):
        X = HKVariety(1, 2, (1,))
        req = CountRequest(X, LineBundleClass(1, 1), Fraction(5))
        with pytest.raises(ValueError):
            sweep(req, [5, 5, 10])

    def test_fit_recovers_power_law(self):
        table = [(b, 3.7 * b ** 3) for b in (10, 20, 40, 80, 160)]
        fit = estimate_exponent(table)
        assert abs(fit.slope - 3.0) < 1e-6

    def test_fit_recovers_log_coefficient(self):
        table = [(b, 2.5 * b * math.log(b) + 7.0 * b)
                 for b in (2 ** k for k in range(8, 18))]
        fit = estimate_exponent(table, exponent=1.0)
        assert abs(fit.log_coefficient - 2.5) < 1e-9
        assert abs(fit.coefficient - 7.0) < 1e-7

    def test_fit_needs_enough_points(self):
        with pytest.raises(DegenerateFitError):
            estimate_exponent([(10, 100), (20, 400)])
