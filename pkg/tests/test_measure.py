"""Tests for certified measure bounds, density ratios, packing and box counts."""

import itertools
import math
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fracpack import (
    EnumerationCapError,
    IFSSystem,
    S_DIM,
    SymbolicInterval,
    SymbolicPoint,
    box_counting_profile,
    density_profile,
    density_ratio,
    influence_count,
    make_lacunary,
    measure_bounds,
    packing_premeasure_estimate,
    project,
    recommended_word_length,
)

ZERO = SymbolicPoint(F(0), F(0))


def rational_interval(a, b) -> SymbolicInterval:
    return SymbolicInterval(SymbolicPoint(F(a), F(0)), SymbolicPoint(F(b), F(0)))


dyadics = st.integers(0, 16).map(lambda k: F(k, 16))


class TestMeasureBounds:
    def test_unit_interval_has_full_mass(self, sys_paper):
        for n in (0, 1, 3):
            mb = measure_bounds(sys_paper, rational_interval(0, 1), n)
            assert mb.lower == mb.upper == 1

    def test_first_cylinder_interval(self, sys_paper):
        # Only the 0-branch cylinder fits inside; the other two touch it.
        mb = measure_bounds(sys_paper, rational_interval(0, F(1, 4)), 1)
        assert (mb.lower, mb.upper) == (F(1, 3), 1)
        assert (mb.contained, mb.intersecting) == (1, 3)

    def test_gap_interval(self, sys_paper):
        mb = measure_bounds(sys_paper, rational_interval(F(3, 8), F(1, 2)), 1)
        assert (mb.lower, mb.upper) == (0, F(1, 3))

    def test_symbolic_endpoint(self, sys_toy):
        J = SymbolicInterval(ZERO, SymbolicPoint(F(0), F(1)))
        mb = measure_bounds(sys_toy, J, 1)
        assert (mb.lower, mb.upper) == (0, F(2, 3))

    def test_reversed_endpoints_rejected(self, sys_toy):
        with pytest.raises(ValueError):
            measure_bounds(sys_toy, rational_interval(F(1, 2), F(1, 4)), 1)

    def test_level_validation(self, sys_toy):
        with pytest.raises(ValueError):
            measure_bounds(sys_toy, rational_interval(0, 1), -1)
        with pytest.raises(EnumerationCapError):
            measure_bounds(sys_toy, rational_interval(0, 1), 16)

    def test_serialization(self, sys_paper):
        d = measure_bounds(sys_paper, rational_interval(0, F(1, 4)), 1).to_dict()
        assert d == {"n": 1, "contained": 1, "intersecting": 3,
                     "lower": "1/3", "upper": "1"}

    @given(a=dyadics, b=dyadics, n=st.integers(0, 6))
    @settings(max_examples=60, deadline=None)
    def test_sandwich(self, a, b, n, sys_toy):
        lo, hi = min(a, b), max(a, b)
        mb = measure_bounds(sys_toy, rational_interval(lo, hi), n)
        assert 0 <= mb.lower <= mb.upper <= 1
        assert mb.lower * 3 ** n == mb.contained

    @given(a=dyadics, b=dyadics, n=st.integers(0, 5))
    @settings(max_examples=60, deadline=None)
    def test_lower_bound_refines_upward(self, a, b, n, sys_toy):
        lo, hi = min(a, b), max(a, b)
        J = rational_interval(lo, hi)
        assert measure_bounds(sys_toy, J, n + 1).lower >= measure_bounds(sys_toy, J, n).lower


class TestDensity:
    def test_three_points_at_unit_C(self, sys_paper):
        entry = density_ratio(sys_paper, ZERO, 1, F(1))
        assert entry.count == 3
        # 3 / 4**s = 1 up to float rounding of the exponent.
        assert entry.ratio_bound == pytest.approx(1.0, rel=1e-12)
        assert entry.radius == F(1, 2)

    def test_empty_ball(self, sys_paper):
        entry = density_ratio(sys_paper, SymbolicPoint(F(10), F(0)), 2, F(1))
        assert entry.count == 0 and entry.ratio_bound == 0.0

    def test_C_below_one_rejected(self, sys_paper):
        with pytest.raises(ValueError):
            density_ratio(sys_paper, ZERO, 1, F(1, 2))

    @given(n=st.integers(1, 6), C=st.sampled_from([F(1), F(2), F(3)]))
    @settings(max_examples=40, deadline=None)
    def test_count_to_ratio_roundtrip(self, n, C, sys_toy):
        entry = density_ratio(sys_toy, project("u10110"[:n] * 2), n, C)
        back = entry.ratio_bound * (2.0 * float(C + 1)) ** S_DIM
        assert back == pytest.approx(entry.count, rel=1e-12)

    def test_profile_self_witness_floor(self, sys_toy):
        word = "u0110u01101"
        prof = density_profile(sys_toy, word, 10, F(3))
        assert len(prof.entries) == 10
        # The word's own prefix always lands in the ball.
        assert all(e.count >= 1 for e in prof.entries)
        floor = 1.0 / 8.0 ** S_DIM
        assert all(e.ratio_bound >= floor - 1e-15 for e in prof.entries)

    def test_profile_blow_up_with_planted_records(self, sys_toy, lam_toy):
        # Records at j = 10: leader 4 in the window of size 6, leader 8 in
        # the first window; both certify extra words inside the ball.
        word = list("0" * 12)
        word[3] = "u"
        word[7] = "u"
        word = "".join(word)
        S = influence_count(word, 10, lam_toy).count
        assert S == 2
        prof = density_profile(sys_toy, word, 10, F(3))
        assert prof.entries[9].n == 10
        assert prof.entries[9].count >= S + 1

    def test_profile_guards(self, sys_toy):
        with pytest.raises(ValueError, match="too short"):
            density_profile(sys_toy, "u10", 5)
        with pytest.raises(ValueError):
            density_profile(sys_toy, "u10", 0)

    def test_profile_serialization(self, sys_toy):
        prof = density_profile(sys_toy, "u10110", 2, F(3))
        rows = prof.csv_rows()
        assert rows[0] == ["n", "radius", "M", "ratio_bound"]
        assert len(rows) == 3
        d = prof.to_dict()
        assert d["schema"] == 1 and d["C"] == "3"
        assert set(d["entries"][0]) == {"n", "radius", "count", "ratio_bound"}

    def test_recommended_word_length(self, lam_toy, lam_paper):
        assert recommended_word_length(lam_toy, 13) == 29
        assert recommended_word_length(lam_paper, 13) == 14
        assert recommended_word_length(make_lacunary("explicit:20,41"), 5) == 6


class TestPacking:
    def test_quarter_gauge(self, sys_paper):
        est = packing_premeasure_estimate(sys_paper, 1, F(1, 4))
        assert est.accepted == 1
        assert est.value == pytest.approx(1 / 3, rel=1e-12)

    def test_eighth_gauge(self, sys_paper):
        est = packing_premeasure_estimate(sys_paper, 1, F(1, 8))
        assert est.accepted == 2
        assert est.value == pytest.approx(2 * 0.125 ** S_DIM, rel=1e-12)

    def test_everything_within_huge_gauge(self, sys_paper):
        est = packing_premeasure_estimate(sys_paper, 3, F(2))
        assert est.accepted == 1
        assert est.value == pytest.approx(2.0 ** S_DIM, rel=1e-12)

    def test_nonpositive_gauge_rejected(self, sys_paper):
        with pytest.raises(ValueError):
            packing_premeasure_estimate(sys_paper, 1, F(0))

    def test_cap(self, sys_toy):
        with pytest.raises(EnumerationCapError):
            packing_premeasure_estimate(sys_toy, 16, F(1, 4))

    def test_monotone_in_gauge(self, sys_toy):
        gauges = [F(1, 256), F(1, 64), F(1, 16), F(1, 4), F(1)]
        counts = [packing_premeasure_estimate(sys_toy, 5, d).accepted for d in gauges]
        assert counts == [25, 10, 4, 2, 1]
        assert counts == sorted(counts, reverse=True)

    @given(n=st.integers(0, 5), num=st.integers(1, 64))
    @settings(max_examples=40, deadline=None)
    def test_matches_exact_greedy_oracle(self, n, num, sys_toy, lam_toy):
        delta = F(num, 64)
        est = packing_premeasure_estimate(sys_toy, n, delta)
        u = lam_toy.u_exact()
        vals = sorted({x.p + x.q * u for x in
                       (project("".join(t)) for t in itertools.product("01u", repeat=n))})
        accepted, last = 0, None
        for v in vals:
            if last is None or v - last > delta:
                accepted, last = accepted + 1, v
        assert est.accepted == accepted

    @pytest.mark.parametrize("n,delta,expected", [(3, F(1, 64), 9),
                                                  (4, F(1, 100), 14),
                                                  (5, F(3, 1024), 39)])
    def test_irrational_comparator_branch(self, n, delta, expected):
        # term_1 = 1 forces the enclosure-backed sort order.
        sys_g = IFSSystem(make_lacunary("geometric:b=3,start=1"))
        assert packing_premeasure_estimate(sys_g, n, delta).accepted == expected


class TestBoxCounting:
    def test_paper_cells_double_per_level(self, sys_paper):
        prof = box_counting_profile(sys_paper, 8)
        assert [r.cells for r in prof.rows] == [2 ** n for n in range(1, 9)]
        for r in prof.rows:
            assert r.dim_estimate == pytest.approx(0.5, rel=1e-12)

    def test_rational_u_matches_floor_oracle(self):
        sys_r = IFSSystem(make_lacunary("explicit:1"))
        prof = box_counting_profile(sys_r, 6)
        u = F(1, 4)
        oracle = []
        for n in range(1, 7):
            cells = {int((x.p + x.q * u) * 4 ** n) for x in
                     (project("".join(t)) for t in itertools.product("01u", repeat=n))}
            oracle.append(len(cells))
        assert [r.cells for r in prof.rows] == oracle == [2, 5, 13, 34, 89, 233]

    def test_geometric_profile_frozen(self):
        sys_g = IFSSystem(make_lacunary("geometric:b=3,start=3"))
        prof = box_counting_profile(sys_g, 12)
        assert [r.cells for r in prof.rows] == [
            2, 4, 8, 20, 50, 125, 325, 845, 2197, 6084, 16848, 46656]

    def test_validation_and_cap(self, sys_toy):
        with pytest.raises(ValueError):
            box_counting_profile(sys_toy, 0)
        with pytest.raises(EnumerationCapError):
            box_counting_profile(sys_toy, 16)

    def test_csv_shape(self, sys_toy):
        rows = box_counting_profile(sys_toy, 3).csv_rows()
        assert rows[0] == ["n", "cells", "dim_estimate"]
        assert len(rows) == 4
