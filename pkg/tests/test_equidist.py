import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import radii_within
from heegner_circles.circles import Radius, angles
from heegner_circles.equidist import (RATE_EXPONENT, circle_discrepancy,
                                      circle_problem_sum, default_harmonic_cutoff,
                                      direct_cosh_count, discrepancy_report,
                                      et_bound, gamma_count, in_sharp_set,
                                      matrix_angle_discrepancy,
                                      sharp_factorization_check,
                                      sharp_power_hits, survey,
                                      _discrepancy_fast, _discrepancy_pairs)
from heegner_circles.quadfield import all_fields, field, v_k


class TestDiscrepancy:
    @pytest.mark.parametrize("m", [1, 2, 3, 5, 8, 13, 40, 64])
    def test_equally_spaced(self, m):
        angs = [2 * math.pi * i / m for i in range(m)]
        assert abs(circle_discrepancy(angs) - 1.0 / m) < 1e-12

    def test_single_angle(self):
        assert circle_discrepancy([2.0]) == 1.0

    def test_q3_example(self):
        got = circle_discrepancy(sorted(angles(Radius(field(3), 5))))
        assert abs(got - 1.0 / 3) < 1e-12

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            circle_discrepancy([])

    @given(st.lists(st.floats(0, 2 * math.pi - 1e-9), min_size=1, max_size=40),
           st.integers(0, 6))
    @settings(max_examples=400, deadline=None)
    def test_pairwise_equals_fast(self, angs, dups):
        # duplicate a prefix to exercise tied angles
        angs = angs + angs[:dups]
        d1 = _discrepancy_pairs(angs)
        d2 = _discrepancy_fast(angs)
        assert abs(d1 - d2) < 1e-12
        assert 0 <= d1 <= 1 + 1e-12

    def test_large_input_uses_fast_path(self):
        n = 1000
        angs = [2 * math.pi * i / n for i in range(n)]
        assert abs(circle_discrepancy(angs) - 1.0 / n) < 1e-12


class TestEtBound:
    def test_all_vanishing_gives_floor(self):
        # q = 3, K = 2: v_1 = v_2 = 0
        f = field(3)
        assert abs(et_bound(f, Radius(f, 5), K=2) - 1.0 / 3) < 1e-12

    def test_q3_example(self):
        # 1/4 + 3 * v_3(4)/3 = 1/4 + 1
        f = field(3)
        assert abs(et_bound(f, Radius(f, 5), K=3) - 1.25) < 1e-12

    def test_default_cutoff(self):
        assert default_harmonic_cutoff(5) == 2
        assert default_harmonic_cutoff(2000) == 8

    def test_dominates_discrepancy(self):
        for f in all_fields():
            for radius in radii_within(f, 150):
                rep = discrepancy_report(radius)
                assert rep.discrepancy <= rep.et_bound + 1e-12

    def test_gamma_count_matches_pairs(self):
        from heegner_circles.circles import enumerate_pairs
        for f in all_fields():
            for radius in radii_within(f, 60):
                assert gamma_count(radius) == len(enumerate_pairs(radius))


class TestCor27:
    def test_matrix_vs_point_side(self):
        for f in all_fields():
            for radius in radii_within(f, 60):
                dm = matrix_angle_discrepancy(radius)
                dp = circle_discrepancy(sorted(angles(radius)))
                assert abs(dm - dp) < 1e-9, (f.q, radius.two_n)


class TestSharpFactorization:
    def test_first_sharp_radius_q11(self):
        f = field(11)
        radius = next(r for r in radii_within(f, 200) if in_sharp_set(r))
        assert radius.two_n == 77
        for k in range(1, 11):
            assert sharp_factorization_check(f, radius, k)

    def test_even_k_identity_odd_q(self):
        for q in (3, 7, 19):
            f = field(q)
            sharp = [r for r in radii_within(f, 400) if in_sharp_set(r)][:6]
            for radius in sharp:
                for k in (2, 4, 6, 8):
                    lhs = v_k(f, radius.norm_product, k)
                    rhs = (v_k(f, radius.n_plus // q, k)
                           * v_k(f, radius.n_minus // q, k))
                    assert abs(lhs - rhs) <= 1e-9

    def test_odd_k_left_side_vanishes(self):
        f = field(7)
        sharp = [r for r in radii_within(f, 400) if in_sharp_set(r)][:6]
        for radius in sharp:
            for k in (1, 3, 5):
                assert v_k(f, radius.norm_product, k) <= 1e-12

    def test_even_q_power_report(self):
        for q in (4, 8):
            f = field(q)
            sharp = [r for r in radii_within(f, 300) if in_sharp_set(r)][:6]
            assert sharp
            for radius in sharp:
                for k in (2, 4, 6):
                    assert sharp_power_hits(f, radius, k), (q, radius.two_n, k)

    def test_non_sharp_rejected(self):
        f = field(3)
        radius = Radius(f, 5)
        assert not in_sharp_set(radius)
        with pytest.raises(ValueError):
            sharp_factorization_check(f, radius, 2)


class TestCircleProblemSum:
    def test_degenerate_centre(self):
        res = circle_problem_sum(field(3), 1.01)
        assert res.direct_count == 3
        assert res.total == 3 and res.convolution_part == 0

    def test_exact_small(self):
        for q in (3, 4, 7):
            f = field(q)
            for x in (2, 10, 50):
                res = circle_problem_sum(f, x)
                assert res.direct_count is not None
                assert res.total == res.direct_count

    def test_summand_integrality(self):
        res = circle_problem_sum(field(3), 60)
        assert isinstance(res.convolution_part, int)

    def test_direct_count_cap(self):
        with pytest.raises(ValueError):
            direct_cosh_count(field(3), 2000)


class TestSurvey:
    def test_small_input(self):
        f = field(4)
        rows, summary = survey(f, f.q / 2 + 1)
        assert summary.degenerate
        assert summary.count == len(rows)

    def test_rows_and_flags(self):
        f = field(3)
        rows, summary = survey(f, 100)
        assert summary.count == len(rows) > 0
        for r in rows:
            assert r.in_B_flat == (r.two_n % 3 != 0)
            assert 0 <= r.discrepancy <= 1
            assert r.point_count == round(2 ** r.log2_r_star)

    def test_even_q_flat_flag(self):
        rows, _ = survey(field(4), 60)
        for r in rows:
            assert r.in_B_flat == ((r.two_n // 2) % 2 == 1)

    def test_thread_count_does_not_change_output(self):
        f = field(7)
        rows1, s1 = survey(f, 120, threads=1)
        rows2, s2 = survey(f, 120, threads=4)
        assert rows1 == rows2 and s1 == s2

    def test_rate_exponent_value(self):
        assert abs(RATE_EXPONENT - math.log(math.pi / 2) / math.log(2)) < 1e-15
        assert abs(RATE_EXPONENT - 0.6515) < 5e-4
