"""
Tests for exact binomials, compositions and colex ranking.
"""

import math

import numpy as np
import pytest

from containerlab.core.combinatorics import (
    binomial,
    binomial_at_most,
    colex_rank,
    colex_unrank,
    compositions,
    count_trivial,
    elements_of,
    iter_compositions,
    iter_k_subsets,
    mask_of,
    real_binomial,
    real_binomial_root,
)


class TestBinomial:
    """Tests for the integer binomials."""

    def test_values(self):
        assert binomial(5, 2) == 10
        assert binomial(3, 5) == 0
        assert binomial(0, 0) == 1

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            binomial(-1, 2)

    def test_at_most(self):
        assert binomial_at_most(4, 1) == 5
        assert binomial_at_most(4, 4) == 16
        assert binomial_at_most(4, 9) == 16
        assert binomial_at_most(4, -1) == 0

    def test_at_most_floors_reals(self):
        assert binomial_at_most(4.9, 1.7) == binomial_at_most(4, 1)


class TestRealBinomial:
    """Tests for the real falling-factorial binomial and its root."""

    def test_matches_integer(self):
        assert real_binomial(7, 3) == pytest.approx(35)

    def test_root_pair(self):
        assert real_binomial_root(2, 3) == pytest.approx(3.0, rel=1e-9)

    def test_root_cases(self):
        assert real_binomial_root(3, 10) == pytest.approx(5.0, rel=1e-9)
        assert real_binomial_root(2, 1) == pytest.approx(2.0, rel=1e-9)

    def test_root_accuracy(self):
        x = real_binomial_root(3, 17.5)
        assert real_binomial(x, 3) == pytest.approx(17.5, rel=1e-9)

    def test_root_inverts_on_random_pairs(self):
        rng = np.random.default_rng(7)
        for _ in range(1000):
            m = int(rng.integers(1, 11))
            target = float(rng.uniform(1, 1e6))
            x = real_binomial_root(m, target)
            assert x >= m - 1
            assert real_binomial(x, m) == pytest.approx(target, rel=1e-9)

    def test_root_of_integer_binomials(self):
        for m in range(1, 11):
            for n in range(m, m + 15):
                assert real_binomial_root(m, binomial(n, m)) == pytest.approx(n, rel=1e-9)

    def test_root_domain(self):
        with pytest.raises(ValueError):
            real_binomial_root(0, 5)
        with pytest.raises(ValueError):
            real_binomial_root(2, 0.5)


class TestCompositions:
    """Tests for composition counting."""

    def test_unbounded(self):
        assert compositions(4) == 8

    def test_bounded_parts(self):
        assert compositions(6, max_parts=2) == 6

    def test_matches_iteration(self):
        for n in range(1, 8):
            for b in range(1, n + 1):
                assert compositions(n, b) == sum(1 for _ in iter_compositions(n, b))

    def test_bounded_estimate(self):
        n, b = 12, 3
        assert math.log2(compositions(n, b)) < b * math.log2(math.e * n / b)

    def test_invalid(self):
        with pytest.raises(ValueError):
            compositions(0)


class TestColex:
    """Tests for colex enumeration and ranking."""

    def test_iteration_order(self):
        subsets = list(iter_k_subsets(4, 2))
        assert [elements_of(m) for m in subsets] == [
            (1, 2), (1, 3), (2, 3), (1, 4), (2, 4), (3, 4),
        ]

    def test_rank_is_position(self):
        for index, mask in enumerate(iter_k_subsets(6, 3)):
            assert colex_rank(mask) == index
            assert colex_unrank(index, 3, 6) == mask

    def test_unrank_out_of_range(self):
        with pytest.raises(ValueError):
            colex_unrank(10, 2, 4)

    def test_mask_labels(self):
        assert mask_of([1, 3]) == 0b101
        assert elements_of(0b101) == (1, 3)
        with pytest.raises(ValueError):
            mask_of([0])


class TestCountTrivial:
    """Tests for the inclusion-exclusion count of trivial families."""

    def test_small_values(self):
        assert count_trivial(4, 2) == 23
        assert count_trivial(5, 2) == 66

    def test_k_equals_one(self):
        # the empty family plus the n singletons
        assert count_trivial(5, 1) == 6
