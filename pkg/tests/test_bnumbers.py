import math
from math import isqrt

import numpy as np
import pytest

from heegner_circles.bnumbers import (Classification, build_progression,
                                      b_star_count, classify,
                                      norm_indicator_array, shifted_count,
                                      sieve_window, sifted_count,
                                      sifted_decomposition)
from heegner_circles.quadfield import all_fields, b_indicator, chi, field


class TestClassify:
    @pytest.mark.parametrize("q,n,expect", [
        (4, 65, Classification.ALL_SPLIT),    # 5 * 13
        (4, 21, Classification.ALL_INERT),    # 3 * 7
        (4, 15, Classification.MIXED),
        (4, 1, Classification.UNIT),
        (3, 3, Classification.MIXED),         # ramified divisor
    ])
    def test_examples(self, q, n, expect):
        assert classify(field(q), n) is expect

    def test_split_closed_under_product(self):
        f = field(7)
        splits = [n for n in range(2, 300)
                  if classify(f, n) is Classification.ALL_SPLIT]
        for a in splits[:15]:
            for b in splits[:15]:
                assert classify(f, a * b) is Classification.ALL_SPLIT

    def test_rejects_zero(self):
        with pytest.raises(ValueError):
            classify(field(3), 0)


class TestNormIndicatorArray:
    def test_against_factorization(self):
        for f in all_fields():
            ind = norm_indicator_array(f, 3000)
            for n in range(1, 3001):
                assert bool(ind[n]) == b_indicator(f, n), (f.q, n)

    def test_segment_boundaries(self):
        # limit above one segment so the block seams are exercised
        f = field(4)
        big = (1 << 20) + 500
        ind = norm_indicator_array(f, big)
        lo = 1 << 20
        for n in range(lo - 300, lo + 300):
            assert bool(ind[n]) == b_indicator(f, n), n

    def test_composite_structure(self):
        # n is a norm value iff it factors as (all-split part) * (even inert
        # powers) * (ramified powers); checked both ways to 1e4 for every field
        from heegner_circles.quadfield import factorize
        for f in all_fields():
            ind = norm_indicator_array(f, 10 ** 4)
            for n in range(1, 10 ** 4 + 1):
                fs = factorize(n)
                structured = all(e % 2 == 0 for p, e in fs if chi(f, p) == -1)
                assert bool(ind[n]) == structured, (f.q, n)


class TestShiftedCount:
    def test_q4_example(self):
        # pairs n, n+1 both sums of two squares below 20: {1,4,8,9,16,17}
        assert shifted_count(field(4), 20, 1) == 6

    def test_q3_example(self):
        assert shifted_count(field(3), 10, 1) == 1

    def test_zero_shift_is_plain_count(self):
        f = field(8)
        ind = norm_indicator_array(f, 500)
        assert shifted_count(f, 500, 0) == int(np.count_nonzero(ind[1:]))

    def test_negative_shift_matches_positive(self):
        # B(x, -h) counts the same pairs as B(x, h) shifted by h
        f, h, x = field(7), 3, 4000
        ind = norm_indicator_array(f, x + h)
        pos = sum(1 for n in range(1, x + 1) if ind[n] and ind[n + h])
        neg = shifted_count(f, x, -h)
        assert abs(pos - neg) <= h


class TestBuildProgression:
    def test_q3_h1(self):
        sp = build_progression(field(3), 1)
        assert (sp.n0, sp.n1, sp.sigma) == (12, 72, 1)
        assert not sp.negated

    def test_q4_h5(self):
        sp = build_progression(field(4), 5)
        assert (sp.n0, sp.n1) == (16, 320)

    def test_h_zero_rejected(self):
        with pytest.raises(ValueError):
            build_progression(field(3), 0)

    def test_negation_when_nonresidue(self):
        sp = build_progression(field(3), 2)   # 2 is not a square mod 3
        assert sp.negated and sp.h_normalized == -2

    def test_ramified_powers_stripped(self):
        sp = build_progression(field(3), 9)
        assert sp.h_normalized in (1, -1)
        sp = build_progression(field(4), 2)
        assert sp.h_normalized % 2 == 1

    @pytest.mark.parametrize("q,h", [
        (3, 1), (3, -1), (3, 2), (3, 5), (4, 1), (4, 5), (4, -3),
        (7, 1), (7, 2), (8, 1), (8, 3), (11, 2), (19, 1),
    ])
    def test_indicator_identity_on_terms(self, q, h):
        # the constructor itself asserts the first 100 terms; re-check a few
        f = field(q)
        sp = build_progression(f, h)
        for j in (1, 7, 50):
            n, m1, m2 = sp.term(j)
            lhs = b_indicator(f, n) and b_indicator(f, n + sp.h_normalized)
            assert lhs == b_indicator(f, m1 * m2)
            assert (m1 * m2) % 2 == 1


class TestBStarCount:
    def test_below_one(self):
        sp = build_progression(field(3), 1)
        assert b_star_count(field(3), sp, 0.5) == 0

    def test_golden_values(self):
        # frozen from the first run of the per-term factorization
        f = field(3)
        sp = build_progression(f, 1)
        assert b_star_count(f, sp, 100) == 37
        assert b_star_count(f, sp, 500) == 166

    def test_monotone(self):
        f = field(3)
        sp = build_progression(f, 1)
        vals = [b_star_count(f, sp, y) for y in (50, 100, 200)]
        assert vals == sorted(vals)

    def test_dominated_by_shifted_count(self):
        f = field(3)
        sp = build_progression(f, 1)
        y = 150
        bstar = b_star_count(f, sp, y)
        x = sp.n1 * y + sp.n0 + abs(sp.h_normalized)
        assert bstar <= shifted_count(f, x, sp.h_normalized if sp.h_normalized > 0
                                      else -sp.h_normalized)


class TestSieveWindow:
    def test_inert_support(self):
        w = sieve_window(field(4), 25)
        assert w.primes == (3, 7, 11, 19, 23)

    def test_z_too_small(self):
        with pytest.raises(ValueError):
            sieve_window(field(4), 2)


class TestSiftedCount:
    def test_empty_sieve_counts_everything(self):
        f = field(4)
        sp = build_progression(f, 1)
        assert sifted_count(f, sp, 40, 2.5) == 40   # no inert prime below 2.5

    def test_nonincreasing_in_z(self):
        f = field(3)
        sp = build_progression(f, 1)
        vals = [sifted_count(f, sp, 120, z) for z in (3.0, 10.0, 30.0, 100.0)]
        assert vals == sorted(vals, reverse=True)

    def test_decomposition_small(self):
        f = field(3)
        sp = build_progression(f, 1)
        dec = sifted_decomposition(f, sp, 300, 2.2)
        assert dec.exact and dec.deeper == 0
        assert dec.sifted == sifted_count(f, sp, 300, 300 ** (1 / 2.2))
        assert dec.all_split == b_star_count(f, sp, 300)
