#!/usr/bin/env python3
"""
Tests for homogeneous ideals, Hilbert functions, apolarity and the scheme constructors.
"""

import numpy as np
import pytest

from apolarity import (HilbertProfile, HomogeneousIdeal, annihilator_piece, check_nonabelian, fat_point_ideal,
                       hilbert_function, hilbert_profile, ideal_piece, in_span, intersect_ideals, length,
                       length_lower_bound, point_ideal, random_span_element, span_basis)
from errors import (DimensionMismatchError, InvalidParameterError, MalformedInputError, UnstableHilbertError,
                    ZeroFormError)
from exact_linalg import SparseMatrix, rank
from flattenings import FlatteningSpec
from poly_core import (DualForm, LinearPoint, contract, parse_dual_form, parse_form, random_form, random_point,
                       veronese_point)

PAIRINGS = ["differential", "coefficient"]


def _ideal(n, *generators):
    return HomogeneousIdeal(n, [parse_dual_form(g, n) for g in generators])


def _distinct_points(rng, n, count, bound=3):
    points = []
    while len(points) < count:
        point = random_point(n, rng, bound=bound)
        if point not in points:
            points.append(point)
    return points


def _in_span_of(forms, form):
    width = len(form.to_vector())
    base = rank(SparseMatrix.from_rows([f.to_vector() for f in forms], ncols=width))
    stacked = rank(SparseMatrix.from_rows([f.to_vector() for f in forms] + [form.to_vector()], ncols=width))
    return base == stacked


class TestHomogeneousIdeal:

    def test_generators_are_checked(self):
        with pytest.raises(DimensionMismatchError):
            HomogeneousIdeal(2, [parse_dual_form("y0", 1)])
        with pytest.raises(ZeroFormError):
            HomogeneousIdeal(1, [DualForm.zero(1, 2)])
        with pytest.raises(MalformedInputError):
            HomogeneousIdeal(1, [parse_form("x0", 1)])

    def test_power(self):
        ideal = _ideal(1, "y1").power(3)
        assert ideal.generators == (parse_dual_form("y1^3", 1),)
        assert ideal.max_degree == 3
        with pytest.raises(InvalidParameterError):
            ideal.power(0)

    def test_piece_is_spanned_by_multiples(self):
        ideal = _ideal(2, "y0*y1", "y2^2")
        assert len(ideal_piece(ideal, 1)) == 0
        assert len(ideal_piece(ideal, 2)) == 2
        # y0*y1*{y0,y1,y2} and y2^2*{y0,y1,y2}
        assert len(ideal_piece(ideal, 3)) == 6


class TestHilbertFunction:

    def test_single_point(self):
        ideal = point_ideal(LinearPoint([1, 2, 3]))
        assert [hilbert_function(ideal, t) for t in range(5)] == [1, 1, 1, 1, 1]
        profile = hilbert_profile(ideal)
        assert profile.stabilized_at == 1
        assert profile.length == 1
        assert length(ideal) == 1

    def test_two_points(self):
        ideal = intersect_ideals([point_ideal(LinearPoint([1, 0, 0])), point_ideal(LinearPoint([0, 1, 0]))])
        assert hilbert_function(ideal, 1) == 2
        assert hilbert_function(ideal, 2) == 2
        assert length(ideal) == 2

    def test_three_general_points(self):
        points = [LinearPoint(c) for c in ([1, 0, 0], [0, 1, 0], [0, 0, 1])]
        ideal = intersect_ideals([point_ideal(p) for p in points])
        assert [hilbert_function(ideal, t) for t in range(4)] == [1, 3, 3, 3]
        assert length(ideal) == 3

    @pytest.mark.parametrize("multiplicity,expected", [(2, 3), (3, 6)])
    def test_fat_points(self, multiplicity, expected):
        ideal = fat_point_ideal(LinearPoint([1, -1, 2]), multiplicity)
        assert length(ideal) == expected

    def test_curve_is_unstable(self):
        ideal = _ideal(2, "y0")
        with pytest.raises(UnstableHilbertError) as excinfo:
            length(ideal, t_max=6)
        assert [h for _, h in excinfo.value.profile.values] == [1, 2, 3, 4, 5, 6, 7]

    def test_empty_scheme_has_length_zero(self):
        assert length(_ideal(1, "y0", "y1")) == 0

    def test_t_max_too_small(self):
        with pytest.raises(InvalidParameterError):
            hilbert_profile(_ideal(1, "y0"), t_max=1)

    def test_plateau_waits_for_generator_degrees(self):
        # h = 1, 2, 3, 3, ... but the cubic generator keeps the window from starting before t = 3
        ideal = _ideal(1, "y0^3")
        profile = hilbert_profile(ideal)
        assert profile.stabilized_at == 3
        assert profile.length == 3

    def test_profile_invariant(self):
        with pytest.raises(MalformedInputError):
            HilbertProfile([(0, 1), (1, 1)], stabilized_at=0, length=1)
        with pytest.raises(MalformedInputError):
            HilbertProfile([(0, -1)])
        profile = HilbertProfile([(0, 1), (1, 2), (2, 2), (3, 2)], stabilized_at=1, length=2)
        assert profile.to_dict() == {"values": [[0, 1], [1, 2], [2, 2], [3, 2]], "stabilized_at": 1, "length": 2}

    def test_lower_bound_never_exceeds_length(self, rng):
        for _ in range(10):
            points = _distinct_points(rng, 2, int(rng.integers(1, 5, endpoint=True)))
            ideal = intersect_ideals([point_ideal(p) for p in points])
            for a in range(5):
                assert length_lower_bound(ideal, a) <= length(ideal) == len(points)


class TestAnnihilator:

    def test_monomial_cube(self):
        form = parse_form("x0*x1*x2", 2)
        assert annihilator_piece(form, 1) == []
        assert annihilator_piece(form, 2) == [parse_dual_form(g, 2) for g in ("y0^2", "y1^2", "y2^2")]

    def test_degree_above_form_warns(self):
        with pytest.warns(UserWarning):
            piece = annihilator_piece(parse_form("x0^2", 1), 3)
        assert len(piece) == 4

    @pytest.mark.parametrize("pairing", PAIRINGS)
    def test_annihilator_is_an_ideal(self, pairing):
        form = random_form(2, 4, seed=21, coeff_bound=3) - random_form(2, 4, seed=22, coeff_bound=3)
        for t in range(1, 4):
            for D in annihilator_piece(form, t, pairing):
                assert contract(D, form, pairing).is_zero
                for i in range(3):
                    y_i = DualForm.monomial(tuple(1 if j == i else 0 for j in range(3)))
                    assert contract(y_i * D, form, pairing).is_zero


class TestInSpan:

    @pytest.mark.parametrize("pairing", PAIRINGS)
    def test_point(self, pairing):
        point = LinearPoint([1, 2])
        ideal = point_ideal(point)
        assert in_span(ideal, veronese_point(point, 3, pairing), pairing)
        assert not in_span(ideal, parse_form("x0^3", 1), pairing)

    def test_tangent_direction(self):
        # x0*x1^3 lies on the tangent line of [0:1], the span of the double point (y0^2)
        assert in_span(_ideal(1, "y0^2"), parse_form("x0*x1^3", 1))
        assert not in_span(_ideal(1, "y0^2"), parse_form("x0^2*x1^2", 1))

    def test_zero_form(self):
        with pytest.raises(ZeroFormError):
            in_span(_ideal(1, "y0"), parse_form("x0 - x0", 1, d=2, allow_zero=True))

    def test_variable_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            in_span(_ideal(2, "y0"), parse_form("x0^2", 1))

    @pytest.mark.parametrize("pairing", PAIRINGS)
    def test_agrees_with_the_span_of_points(self, pairing):
        rng = np.random.default_rng(99)
        for trial in range(25):
            count = int(rng.integers(1, 4, endpoint=True))
            d = int(rng.integers(2, 5, endpoint=True))
            points = _distinct_points(rng, 2, count)
            ideal = intersect_ideals([point_ideal(p) for p in points])
            powers = [veronese_point(p, d, pairing) for p in points]
            if trial % 2:
                form = powers[0]
                for weight, power in zip(rng.integers(1, 5, size=count), powers[1:]):
                    form = form + power.scale(int(weight))
            else:
                form = random_form(2, d, seed=trial)
            assert in_span(ideal, form, pairing) == _in_span_of(powers, form)


class TestNonabelian:

    def test_containment_for_forms_in_the_span(self):
        ideal = _ideal(1, "y0*y1")
        report = check_nonabelian(ideal, parse_form("x0^3 + x1^3", 1), FlatteningSpec.catalecticant(1, 3, 2))
        assert report.contained and report.in_span
        assert report.verdict() == "true"
        assert (report.piece_dim, report.kernel_dim) == (1, 1)

    def test_form_outside_the_span_is_vacuous(self):
        report = check_nonabelian(_ideal(1, "y0*y1"), parse_form("x0^2*x1", 1),
                                  FlatteningSpec.catalecticant(1, 3, 2))
        assert report.vacuous
        assert report.verdict() == "vacuous"
        assert not report

    def test_koszul_is_rejected(self):
        with pytest.raises(InvalidParameterError):
            check_nonabelian(_ideal(2, "y0"), parse_form("x0^3", 2), FlatteningSpec.koszul(2, 3, 1, 1))


class TestSchemes:

    def test_point_ideal_generators(self):
        ideal = point_ideal(LinearPoint([0, 2, 4]))
        assert ideal.generators == (parse_dual_form("y0", 2), parse_dual_form("y2 - 2*y1", 2))

    def test_union_contains_both_spans(self):
        p, q = LinearPoint([1, 1, 0]), LinearPoint([1, 0, -1])
        ideal = intersect_ideals([point_ideal(p), fat_point_ideal(q)])
        assert length(ideal) == 4
        assert in_span(ideal, veronese_point(p, 3))
        assert in_span(ideal, veronese_point(q, 3))

    def test_union_only_gets_smaller(self):
        p, q = LinearPoint([1, 3, 0]), LinearPoint([0, 1, 1])
        ideal = point_ideal(p)
        union = intersect_ideals([ideal, point_ideal(q)])
        for t in range(5):
            assert hilbert_function(union, t) >= hilbert_function(ideal, t)

    def test_intersection_needs_ideals(self):
        with pytest.raises(InvalidParameterError):
            intersect_ideals([])
        with pytest.raises(DimensionMismatchError):
            intersect_ideals([point_ideal(LinearPoint([1, 0])), point_ideal(LinearPoint([1, 0, 0]))])

    @pytest.mark.parametrize("pairing", PAIRINGS)
    def test_span_of_a_point_is_its_veronese_image(self, pairing):
        point = LinearPoint([1, -2, 1])
        basis = span_basis(point_ideal(point), 3, pairing)
        assert len(basis) == 1
        assert _in_span_of(basis, veronese_point(point, 3, pairing))

    def test_random_span_element_is_in_the_span(self):
        ideal = intersect_ideals([point_ideal(LinearPoint([1, 0, 0])), fat_point_ideal(LinearPoint([1, 1, 1]))])
        for seed in range(5):
            form = random_span_element(ideal, 4, seed=seed)
            assert not form.is_zero
            assert in_span(ideal, form)
