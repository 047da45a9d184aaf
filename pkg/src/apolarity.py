#!/usr/bin/env python3
"""
Homogeneous ideals in y0..yn as stand-ins for subschemes R of P^n.

The degree-t piece (I)_t plays the role of H^0(I_R ⊗ O(t)), which is exact
for saturated ideals. Point ideals, fat points and their intersections are
saturated, so the schemes built here are represented faithfully; ideals read
from files are taken as given.
"""

import warnings
from dataclasses import dataclass, field as dataclass_field
from functools import lru_cache
from itertools import combinations_with_replacement
from math import comb
from typing import Optional

import numpy as np

from config import DEFAULT_COEFF_BOUND, DEFAULT_PAIRING, DEFAULT_SEED, DEFAULT_T_MAX, HILBERT_PLATEAU
from errors import (DimensionMismatchError, InvalidParameterError, MalformedInputError,
                    UnstableHilbertError, ZeroFormError)
from exact_linalg import QQ, SparseMatrix, kernel_basis, rank, row_echelon_basis, span_intersection
from flattenings import contraction_matrix
from poly_core import DualForm, HomogeneousForm, contract, monomial_count, monomials, pairing_weight


class HomogeneousIdeal:
    """An ideal of the dual polynomial ring given by homogeneous generators."""

    __slots__ = ("n", "generators", "field")

    def __init__(self, n, generators=(), field=QQ):
        if n < 0:
            raise InvalidParameterError(f"need n >= 0, got {n}")
        generators = tuple(generators)
        for g in generators:
            if not isinstance(g, DualForm):
                raise MalformedInputError(f"ideal generators must be dual forms, got {type(g).__name__}")
            if g.n != n:
                raise DimensionMismatchError(f"generator {g} lives in {g.n + 1} variables, not {n + 1}")
            if g.field != field:
                raise MalformedInputError(f"generator {g} is over {g.field.tag}, the ideal over {field.tag}")
            if g.is_zero:
                raise ZeroFormError("ideal generators must be nonzero")
        self.n = n
        self.generators = generators
        self.field = field

    @property
    def max_degree(self):
        return max((g.d for g in self.generators), default=0)

    def power(self, exponent):
        """I^m, generated by all m-fold products of generators."""
        if exponent < 1:
            raise InvalidParameterError(f"ideal power must be at least 1, got {exponent}")
        products = []
        for combo in combinations_with_replacement(self.generators, exponent):
            product = combo[0]
            for g in combo[1:]:
                product = product * g
            if not product.is_zero:
                products.append(product)
        return HomogeneousIdeal(self.n, products, self.field)

    def __eq__(self, other):
        return (isinstance(other, HomogeneousIdeal) and other.n == self.n
                and other.field == self.field and other.generators == self.generators)

    def __hash__(self):
        return hash((self.n, self.field, self.generators))

    def __repr__(self):
        return f"HomogeneousIdeal(n={self.n}, ({', '.join(str(g) for g in self.generators)}))"


@dataclass
class HilbertProfile:
    """Hilbert function values h(t) = dim (S/I)_t up to where the search stopped."""

    values: list = dataclass_field(default_factory=list)
    stabilized_at: Optional[int] = None
    length: Optional[int] = None

    def __post_init__(self):
        if any(h < 0 for _, h in self.values):
            raise MalformedInputError("Hilbert function values must be nonnegative")
        if self.stabilized_at is not None:
            tail = [h for _, h in self.values[-HILBERT_PLATEAU:]]
            if len(tail) < HILBERT_PLATEAU or len(set(tail)) != 1 or self.length != tail[0]:
                raise MalformedInputError("a stabilized profile must end on a plateau equal to its length")

    def to_dict(self):
        return {"values": [[t, h] for t, h in self.values],
                "stabilized_at": self.stabilized_at, "length": self.length}


# ----------------------------------------------------------------------
# Graded pieces and Hilbert function
# ----------------------------------------------------------------------

@lru_cache(maxsize=256)
def ideal_piece(ideal, t):
    """Basis of (I)_t as dual forms, in reduced echelon form."""
    if t < 0:
        raise InvalidParameterError(f"degree must be nonnegative, got {t}")
    n, field = ideal.n, ideal.field
    rows = []
    for g in ideal.generators:
        if g.d > t:
            continue
        for m in monomials(n, t - g.d):
            rows.append((DualForm.monomial(m, 1, field) * g).to_vector())
    if not rows:
        return ()
    matrix = SparseMatrix.from_rows(rows, field, ncols=monomial_count(n, t))
    return tuple(DualForm.from_vector(n, t, vector, field) for vector in row_echelon_basis(matrix))


def hilbert_function(ideal, t):
    """dim (S/I)_t = C(n+t, n) - dim (I)_t."""
    return comb(ideal.n + t, ideal.n) - len(ideal_piece(ideal, t))


def hilbert_profile(ideal, t_max=DEFAULT_T_MAX):
    """Hilbert values from t = 0 until a plateau past the generator degrees, or t_max."""
    if t_max < 2:
        raise InvalidParameterError(f"t_max must be at least 2, got {t_max}")
    start = ideal.max_degree
    values = []
    for t in range(t_max + 1):
        values.append((t, hilbert_function(ideal, t)))
        window = values[-HILBERT_PLATEAU:]
        if (len(window) == HILBERT_PLATEAU and window[0][0] >= start
                and len({h for _, h in window}) == 1):
            return HilbertProfile(values, stabilized_at=window[0][0], length=window[0][1])
    return HilbertProfile(values)


def length(ideal, t_max=DEFAULT_T_MAX):
    """Length of the scheme cut out by I, read off the stabilized Hilbert function."""
    profile = hilbert_profile(ideal, t_max)
    if profile.length is None:
        raise UnstableHilbertError(
            f"Hilbert function did not stabilize by t={t_max}; raise t_max "
            f"(the ideal may not define a zero-dimensional scheme)", profile)
    return profile.length


def length_lower_bound(ideal, a):
    """h^0(O(a)) - h^0(I_R ⊗ O(a)), a lower bound for length(I)."""
    return hilbert_function(ideal, a)


# ----------------------------------------------------------------------
# Apolar ideal and span membership
# ----------------------------------------------------------------------

def annihilator_piece(form, t, pairing=DEFAULT_PAIRING):
    """Basis of Ann(F)_t = {D of degree t : D ⌟ F = 0}."""
    if t < 0:
        raise InvalidParameterError(f"degree must be nonnegative, got {t}")
    if t > form.d:
        warnings.warn(f"every dual form of degree {t} > {form.d} annihilates F; returning all monomials")
        return [DualForm.monomial(m, 1, form.field) for m in monomials(form.n, t)]
    matrix = contraction_matrix(form, t, pairing)
    return [DualForm.from_vector(form.n, t, v, form.field) for v in kernel_basis(matrix.transpose())]


def _check_ideal_and_form(ideal, form):
    if ideal.n != form.n:
        raise DimensionMismatchError(f"ideal in {ideal.n + 1} variables, form in {form.n + 1}")
    if ideal.field != form.field:
        raise MalformedInputError(f"ideal over {ideal.field.tag}, form over {form.field.tag}")


def in_span(ideal, form, pairing=DEFAULT_PAIRING):
    """Apolarity test: F lies in the span of R iff (I)_d ⌟ F = 0."""
    if form.is_zero:
        raise ZeroFormError("span membership is only defined for a nonzero form")
    _check_ideal_and_form(ideal, form)
    return all(contract(D, form, pairing).is_zero for D in ideal_piece(ideal, form.d))


@dataclass(frozen=True)
class NonabelianReport:
    """Outcome of checking (I)_a ⊆ ker Cat_a(F)."""

    contained: bool
    in_span: bool
    piece_dim: int
    kernel_dim: int

    @property
    def vacuous(self):
        """F is not in the span of R, so containment is not implied."""
        return not self.in_span

    def __bool__(self):
        return self.contained

    def verdict(self):
        if self.vacuous:
            return "vacuous"
        return "true" if self.contained else "false"


def check_nonabelian(ideal, form, spec, pairing=DEFAULT_PAIRING):
    """Whether every element of (I)_a lies in the kernel of Cat_a(F)."""
    if spec.kind != "cat":
        raise InvalidParameterError("H^0(I_R ⊗ E) is only available for catalecticants")
    if spec.n != form.n or spec.d != form.d:
        raise DimensionMismatchError(f"{spec.label} does not fit a form with n={form.n}, d={form.d}")
    _check_ideal_and_form(ideal, form)
    piece = ideal_piece(ideal, spec.a)
    contained = all(contract(D, form, pairing).is_zero for D in piece)
    kernel_dim = len(annihilator_piece(form, spec.a, pairing))
    return NonabelianReport(contained, in_span(ideal, form, pairing), len(piece), kernel_dim)


# ----------------------------------------------------------------------
# Scheme constructors
# ----------------------------------------------------------------------

def point_ideal(point):
    """Ideal of a reduced point: y_j - l_j y_k, with k the first nonzero coordinate of l."""
    field = point.field
    n = point.n
    k = next(i for i, c in enumerate(point.coords) if c)
    generators = []
    for j in range(n + 1):
        if j == k:
            continue
        unit_j = tuple(1 if i == j else 0 for i in range(n + 1))
        unit_k = tuple(1 if i == k else 0 for i in range(n + 1))
        terms = {unit_j: field.one}
        if point.coords[j]:
            terms[unit_k] = field.neg(point.coords[j])
        generators.append(DualForm(n, 1, terms, field))
    return HomogeneousIdeal(n, generators, field)


def fat_point_ideal(point, multiplicity=2):
    """I_l^m, the (m-1)-th infinitesimal neighbourhood of [l]; length C(n+m-1, n)."""
    return point_ideal(point).power(multiplicity)


def intersect_ideals(ideals, max_degree=None):
    """Ideal of the union of the schemes, generated in degrees 1..max_degree.

    max_degree defaults to the sum of the lengths, which bounds the generator
    degrees of a zero-dimensional scheme of that length.
    """
    ideals = list(ideals)
    if not ideals:
        raise InvalidParameterError("need at least one ideal to intersect")
    n, field = ideals[0].n, ideals[0].field
    for other in ideals[1:]:
        if other.n != n or other.field != field:
            raise DimensionMismatchError("ideals to intersect must share variables and field")
    if len(ideals) == 1:
        return ideals[0]
    if max_degree is None:
        max_degree = sum(length(ideal) for ideal in ideals)
    generators = []
    for t in range(1, max_degree + 1):
        width = monomial_count(n, t)
        common = None
        for ideal in ideals:
            piece = ideal_piece(ideal, t)
            matrix = SparseMatrix.from_rows([g.to_vector() for g in piece], field, ncols=width)
            if common is None:
                common = matrix
            else:
                common = SparseMatrix.from_rows(span_intersection(common, matrix), field, ncols=width)
            if common.nrows == 0:
                break
        if common is None or common.nrows == 0:
            continue
        generated = [g.to_vector() for g in ideal_piece(HomogeneousIdeal(n, generators, field), t)]
        current = len(generated)
        for vector in common.to_dense():
            candidate = generated + [vector]
            candidate_rank = rank(SparseMatrix.from_rows(candidate, field, ncols=width))
            if candidate_rank > current:
                generated = candidate
                current = candidate_rank
                generators.append(DualForm.from_vector(n, t, vector, field))
    return HomogeneousIdeal(n, generators, field)


def span_basis(ideal, d, pairing=DEFAULT_PAIRING):
    """Basis of the degree-d span of R: forms killed by (I)_d under the full pairing."""
    n, field = ideal.n, ideal.field
    basis = monomials(n, d)
    rows = []
    for D in ideal_piece(ideal, d):
        rows.append([field.mul(D.coefficient(m), field.element(pairing_weight(m, m, pairing))) for m in basis])
    if not rows:
        return [HomogeneousForm.monomial(m, 1, field) for m in basis]
    matrix = SparseMatrix.from_rows(rows, field, ncols=len(basis))
    return [HomogeneousForm.from_vector(n, d, v, field) for v in kernel_basis(matrix)]


def random_span_element(ideal, d, seed=DEFAULT_SEED, coeff_bound=DEFAULT_COEFF_BOUND, pairing=DEFAULT_PAIRING):
    """A random nonzero integer combination of span_basis(I, d)."""
    basis = span_basis(ideal, d, pairing)
    if not basis:
        raise ZeroFormError(f"the span of the scheme is empty in degree {d}")
    rng = np.random.default_rng(seed)
    while True:
        weights = rng.integers(-coeff_bound, coeff_bound, size=len(basis), endpoint=True)
        form = HomogeneousForm.zero(ideal.n, d, ideal.field)
        for weight, element in zip(weights, basis):
            if weight:
                form = form + element.scale(int(weight))
        if not form.is_zero:
            return form