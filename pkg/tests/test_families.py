"""
Tests for family models, the phi encoding and star geometry.
"""

import pytest

from containerlab.core.combinatorics import mask_of
from containerlab.core.families import (
    classify_family,
    frequent_element,
    hilton_milner_bound,
    is_intersecting,
    is_maximal,
    is_nice,
    maximal_completion,
    nearest_star,
    phi_inverse,
    phi_map,
)
from containerlab.models.family import KFamily


class TestKFamily:
    """Tests for the family model and its parsers."""

    def test_members_sorted_colex(self):
        family = KFamily.from_sets(4, 2, [(3, 4), (1, 2)])
        assert family.sets() == [(1, 2), (3, 4)]

    def test_duplicates_rejected(self):
        with pytest.raises(ValueError):
            KFamily.from_sets(4, 2, [(1, 2), (2, 1)])

    def test_wrong_size_rejected(self):
        with pytest.raises(ValueError):
            KFamily.from_sets(4, 2, [(1, 2, 3)])

    def test_parse_inline(self):
        family = KFamily.parse_inline("1,2;1,3; 2,3", n=5)
        assert family.k == 2
        assert len(family) == 3

    def test_parse_inline_errors(self):
        with pytest.raises(ValueError):
            KFamily.parse_inline("1,x", n=4)
        with pytest.raises(ValueError):
            KFamily.parse_inline("", n=4)

    def test_file_round_trip(self, temp_dir, triangle):
        path = temp_dir / "triangle.txt"
        path.write_text("# triangle\n" + triangle.to_text())
        assert KFamily.from_file(path) == triangle

    def test_file_bad_header(self):
        with pytest.raises(ValueError):
            KFamily.from_text("5\n1 2\n")


class TestPredicates:
    """Tests for intersecting, trivial and maximal."""

    def test_intersecting(self, triangle):
        assert is_intersecting(triangle)
        assert not is_intersecting(KFamily.from_sets(4, 2, [(1, 2), (3, 4)]))

    def test_classify_triangle(self, triangle):
        result = classify_family(triangle)
        assert not result.trivial
        assert result.centers == ()

    def test_classify_star(self):
        result = classify_family(KFamily.from_sets(5, 2, [(1, 2), (1, 5)]))
        assert result.trivial
        assert result.centers == (1,)

    def test_empty_family_degenerate(self):
        result = classify_family(KFamily(n=5, k=2))
        assert result.trivial and result.degenerate
        assert result.centers == (1, 2, 3, 4, 5)

    def test_frequent_element_ties_to_largest(self, triangle):
        assert frequent_element(triangle) == 3

    def test_triangle_maximal_at_five(self, triangle):
        assert is_maximal(triangle)

    def test_completion(self):
        family = maximal_completion(KFamily.from_sets(5, 2, [(1, 2)]))
        assert is_maximal(family)
        assert mask_of([1, 2]) in family

    def test_completion_rejects_disjoint(self):
        with pytest.raises(ValueError):
            maximal_completion(KFamily.from_sets(5, 2, [(1, 2), (3, 4)]))

    def test_hilton_milner(self):
        assert hilton_milner_bound(5, 2) == 3
        assert hilton_milner_bound(6, 2) == 3
        assert hilton_milner_bound(7, 3) == 13
        with pytest.raises(ValueError):
            hilton_milner_bound(4, 2)


class TestPhiMap:
    """Tests for the phi encoding."""

    def test_triangle_image(self, triangle):
        image = phi_map(triangle)
        assert image.f == 3
        assert image.top == (mask_of([3, 4]),)
        assert image.bottom == (mask_of([1]), mask_of([2]))
        assert image.independent
        assert image.size == 3

    def test_inverse_restores(self, triangle):
        assert phi_inverse(phi_map(triangle)) == triangle

    def test_star_encodes_to_bottom(self):
        star = KFamily.from_sets(5, 2, [(1, 5), (2, 5), (3, 5)])
        image = phi_map(star)
        assert image.f == 5
        assert image.top == ()
        assert len(image.bottom) == 3

    def test_rejects_non_intersecting(self):
        with pytest.raises(ValueError):
            phi_map(KFamily.from_sets(5, 2, [(1, 2), (3, 4)]))

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            phi_map(KFamily(n=5, k=2))

    def test_image_dict(self, triangle):
        data = phi_map(triangle).to_dict()
        assert data["A"] == [[3, 4]]
        assert data["B"] == [[1], [2]]


class TestStarGeometry:
    """Tests for nearest stars and niceness."""

    def test_nearest_star_triangle(self, triangle):
        star = nearest_star(triangle)
        assert star.center == 3
        assert star.distance == 3
        assert star.alpha == pytest.approx(0.25)
        assert star.implied_constant == pytest.approx(0.6)

    def test_full_star_distance_zero(self):
        star = KFamily.from_sets(5, 2, [(1, 2), (1, 3), (1, 4), (1, 5)])
        result = nearest_star(star)
        assert (result.center, result.distance) == (1, 0)
        assert result.implied_constant is None

    def test_triangle_is_nice(self, triangle):
        report = is_nice(triangle)
        assert report.nice
        assert report.witnesses == (1, 2, 3)
        assert report.largest_component[4] == 3

    def test_nice_needs_2k_plus_1(self):
        with pytest.raises(ValueError):
            is_nice(KFamily.from_sets(6, 2, [(1, 2)]))
