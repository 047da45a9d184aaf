#!/usr/bin/env python3
"""
Homogeneous forms in x0..xn, dual forms in y0..yn, and the contraction
pairing between them.

Monomials are exponent tuples of length n+1. Within one degree they are
listed in graded-lex order with x0 > x1 > ... > xn, which fixes every row and
column order of the matrices built from them.
"""

import re
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement
from math import comb, perm
from types import MappingProxyType

import numpy as np
from sympy import multinomial_coefficients

from config import (DEFAULT_COEFF_BOUND, DEFAULT_PAIRING, DEFAULT_SEED, MAX_PARSE_COEFFICIENT_BITS,
                    MAX_PARSE_DEGREE, MAX_PARSE_TERM_PRODUCTS, PAIRINGS, POINT_COORD_BOUND)
from errors import (DegreeError, DimensionMismatchError, InvalidParameterError,
                    MalformedInputError, ParseError, ZeroFormError)
from exact_linalg import QQ


@lru_cache(maxsize=None)
def monomials(n, degree):
    """All exponent tuples of the given degree in n+1 variables, graded-lex descending."""
    if degree < 0:
        return ()
    result = []
    for combo in combinations_with_replacement(range(n + 1), degree):
        exponents = [0] * (n + 1)
        for i in combo:
            exponents[i] += 1
        result.append(tuple(exponents))
    return tuple(result)


@lru_cache(maxsize=None)
def monomial_index(n, degree):
    return {m: i for i, m in enumerate(monomials(n, degree))}


def monomial_count(n, degree):
    return comb(n + degree, n) if degree >= 0 else 0


def format_monomial(exponents, variable="x"):
    parts = []
    for i, e in enumerate(exponents):
        if e == 1:
            parts.append(f"{variable}{i}")
        elif e > 1:
            parts.append(f"{variable}{i}^{e}")
    return "*".join(parts) if parts else "1"


class _GradedForm:
    """Shared machinery of HomogeneousForm and DualForm (values are immutable)."""

    VARIABLE = "x"

    __slots__ = ("n", "d", "field", "_terms")

    def __init__(self, n, d, terms=None, field=QQ):
        if n < 0 or d < 0:
            raise InvalidParameterError(f"need n >= 0 and d >= 0, got n={n}, d={d}")
        self.n = n
        self.d = d
        self.field = field
        stored = {}
        for exponents, value in (terms or {}).items():
            exponents = tuple(int(e) for e in exponents)
            if len(exponents) != n + 1 or min(exponents) < 0:
                raise MalformedInputError(f"{exponents} is not a monomial in {n + 1} variables")
            if sum(exponents) != d:
                raise DegreeError(f"monomial {format_monomial(exponents, self.VARIABLE)} "
                                  f"has degree {sum(exponents)}, expected {d}")
            if not field.is_element(value):
                value = field.element(value)
            if value:
                stored[exponents] = value
        self._terms = stored

    @classmethod
    def zero(cls, n, d, field=QQ):
        return cls(n, d, {}, field)

    @classmethod
    def monomial(cls, exponents, coefficient=1, field=QQ):
        exponents = tuple(exponents)
        return cls(len(exponents) - 1, sum(exponents), {exponents: field.element(coefficient)}, field)

    @classmethod
    def from_vector(cls, n, d, vector, field=QQ):
        """Inverse of ``to_vector``: coordinates over ``monomials(n, d)``."""
        basis = monomials(n, d)
        if len(vector) != len(basis):
            raise DimensionMismatchError(f"{len(vector)} coordinates for {len(basis)} monomials")
        return cls(n, d, {m: v for m, v in zip(basis, vector) if v}, field)

    @property
    def terms(self):
        return MappingProxyType(self._terms)

    @property
    def is_zero(self):
        return not self._terms

    def coefficient(self, exponents):
        return self._terms.get(tuple(exponents), self.field.zero)

    def to_vector(self):
        return [self._terms.get(m, self.field.zero) for m in monomials(self.n, self.d)]

    def _check_compatible(self, other):
        if type(other) is not type(self):
            raise MalformedInputError(f"cannot combine {type(self).__name__} and {type(other).__name__}")
        if other.n != self.n:
            raise DimensionMismatchError(f"forms in {self.n + 1} and {other.n + 1} variables")
        if other.field != self.field:
            raise MalformedInputError(f"forms over {self.field.tag} and {other.field.tag}")

    def __add__(self, other):
        self._check_compatible(other)
        if other.d != self.d:
            raise DegreeError(f"cannot add forms of degree {self.d} and {other.d}")
        terms = dict(self._terms)
        for m, v in other._terms.items():
            terms[m] = self.field.add(terms.get(m, self.field.zero), v)
        return type(self)(self.n, self.d, terms, self.field)

    def __neg__(self):
        return type(self)(self.n, self.d, {m: self.field.neg(v) for m, v in self._terms.items()}, self.field)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, factor):
        factor = self.field.element(factor)
        return type(self)(self.n, self.d, {m: self.field.mul(v, factor) for m, v in self._terms.items()},
                          self.field)

    def __mul__(self, other):
        """Polynomial product; degrees add."""
        if not isinstance(other, _GradedForm):
            return self.scale(other)
        self._check_compatible(other)
        terms = {}
        for m1, v1 in self._terms.items():
            for m2, v2 in other._terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                terms[m] = self.field.add(terms.get(m, self.field.zero), self.field.mul(v1, v2))
        return type(self)(self.n, self.d + other.d, terms, self.field)

    def __eq__(self, other):
        return (type(other) is type(self) and other.n == self.n and other.d == self.d
                and other.field == self.field and other._terms == self._terms)

    def __hash__(self):
        return hash((type(self).__name__, self.n, self.d, self.field, frozenset(self._terms.items())))

    def __str__(self):
        return format_form(self)

    def __repr__(self):
        return f"{type(self).__name__}(n={self.n}, d={self.d}, field={self.field.tag}, {format_form(self)!r})"


class HomogeneousForm(_GradedForm):
    """An element of S^d V in the variables x0..xn."""

    VARIABLE = "x"
    __slots__ = ()


class DualForm(_GradedForm):
    """An element of S^a V* in the dual variables y0..yn."""

    VARIABLE = "y"
    __slots__ = ()

    def evaluate(self, point):
        """Value at the coordinates of a LinearPoint (or any coordinate sequence)."""
        coords = point.coords if isinstance(point, LinearPoint) else [self.field.element(c) for c in point]
        if len(coords) != self.n + 1:
            raise DimensionMismatchError(f"point with {len(coords)} coordinates for {self.n + 1} variables")
        total = self.field.zero
        for m, v in self._terms.items():
            term = v
            for c, e in zip(coords, m):
                if e:
                    term = self.field.mul(term, self.field.power(c, e))
            total = self.field.add(total, term)
        return total


class LinearPoint:
    """A point [l] of P^n, scaled so that its first nonzero coordinate is 1."""

    __slots__ = ("coords", "field")

    def __init__(self, coords, field=QQ):
        values = [field.element(c) for c in coords]
        if not values:
            raise MalformedInputError("a point needs at least one coordinate")
        leading = next((v for v in values if v), None)
        if leading is None:
            raise MalformedInputError("the zero vector is not a projective point")
        inverse = field.inv(leading)
        self.coords = tuple(field.mul(v, inverse) for v in values)
        self.field = field

    @staticmethod
    def leading_coordinate(coords, field=QQ):
        """First nonzero entry of a raw coordinate vector (what canonicalization divides by)."""
        for c in coords:
            value = field.element(c)
            if value:
                return value
        raise MalformedInputError("the zero vector is not a projective point")

    @property
    def n(self):
        return len(self.coords) - 1

    def __eq__(self, other):
        return isinstance(other, LinearPoint) and other.coords == self.coords and other.field == self.field

    def __hash__(self):
        return hash((self.coords, self.field))

    def __repr__(self):
        return "LinearPoint(" + ",".join(self.field.format(c) for c in self.coords) + ")"


# ----------------------------------------------------------------------
# Text grammar
#
#   expr   := term (('+' | '-') term)*
#   term   := factor (('*' | '/') factor)*      division only by nonzero constants
#   factor := ('+' | '-') factor | atom (('^' | '**') INTEGER)?
#   atom   := INTEGER | VARIABLE | '(' expr ')'
#
# The text is tokenized and evaluated here; nothing is handed to eval.
# ----------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<number>\d+)|(?P<name>[A-Za-z_]\w*)|(?P<op>\*\*|[-+*/^()]))")


def infer_variable_count(text, variable="x"):
    """Highest variable index used in the text (so n), or None if no variable appears."""
    indices = [int(i) for i in re.findall(rf"\b{variable}(\d+)\b", text)]
    return max(indices) if indices else None


def _tokenize(text):
    tokens = []
    position = 0
    while position < len(text):
        if text[position:].strip() == "":
            break
        match = _TOKEN.match(text, position)
        if not match:
            offending = text[position:].lstrip()[0]
            if offending == ".":
                raise ParseError(f"coefficients must be integers or fractions p/q: {text!r}")
            raise ParseError(f"unexpected character {offending!r} in {text!r}")
        kind = match.lastgroup
        tokens.append((kind, match.group(kind)))
        position = match.end()
    return tokens


def _poly_degree(poly):
    return max((sum(m) for m in poly), default=0)


def _poly_add(first, second, sign=1):
    result = dict(first)
    for m, v in second.items():
        w = result.get(m, 0) + sign * v
        if w:
            result[m] = w
        else:
            result.pop(m, None)
    return result


def _poly_mul(first, second):
    result = {}
    for m1, v1 in first.items():
        for m2, v2 in second.items():
            m = tuple(a + b for a, b in zip(m1, m2))
            w = result.get(m, 0) + v1 * v2
            if w:
                result[m] = w
            else:
                result.pop(m, None)
    return result


class _FormParser:
    """Recursive-descent evaluator for one polynomial in variable0..variableN over Q."""

    def __init__(self, text, n, variable):
        self.text = text
        self.n = n
        self.variable = variable
        self.tokens = _tokenize(text)
        self.position = 0
        self.one = tuple([0] * (n + 1))

    def _peek(self):
        return self.tokens[self.position] if self.position < len(self.tokens) else (None, None)

    def _take(self):
        token = self._peek()
        self.position += 1
        return token

    def _fail(self, message):
        raise ParseError(f"cannot parse {self.text!r}: {message}")

    def _multiply(self, first, second):
        if len(first) * len(second) > MAX_PARSE_TERM_PRODUCTS:
            self._fail(f"expansion needs more than {MAX_PARSE_TERM_PRODUCTS} term products")
        poly = _poly_mul(first, second)
        if _poly_degree(poly) > MAX_PARSE_DEGREE:
            self._fail(f"degree exceeds {MAX_PARSE_DEGREE}")
        return poly

    def parse(self):
        if not self.tokens:
            self._fail("empty input")
        poly = self._expr()
        if self.position != len(self.tokens):
            self._fail(f"unexpected {self._peek()[1]!r}")
        return poly

    def _expr(self):
        poly = self._term()
        while self._peek() in (("op", "+"), ("op", "-")):
            sign = 1 if self._take()[1] == "+" else -1
            poly = _poly_add(poly, self._term(), sign)
        return poly

    def _term(self):
        poly = self._factor()
        while self._peek() in (("op", "*"), ("op", "/")):
            operator = self._take()[1]
            other = self._factor()
            if operator == "*":
                poly = self._multiply(poly, other)
                continue
            if any(m != self.one for m in other):
                self._fail("division by a non-constant")
            divisor = other.get(self.one, 0)
            if not divisor:
                self._fail("division by zero")
            poly = {m: v / divisor for m, v in poly.items()}
        return poly

    def _factor(self):
        if self._peek() in (("op", "+"), ("op", "-")):
            sign = 1 if self._take()[1] == "+" else -1
            return {m: sign * v for m, v in self._factor().items()}
        base = self._atom()
        if self._peek() in (("op", "^"), ("op", "**")):
            self._take()
            kind, value = self._take()
            if kind != "number" or len(value) > 4:
                self._fail("exponents must be small nonnegative integer literals")
            exponent = int(value)
            if exponent > MAX_PARSE_DEGREE or _poly_degree(base) * exponent > MAX_PARSE_DEGREE:
                self._fail(f"degree exceeds {MAX_PARSE_DEGREE}")
            bits = max((max(v.numerator.bit_length(), v.denominator.bit_length()) for v in base.values()),
                       default=0) + len(base).bit_length()
            if bits * exponent > MAX_PARSE_COEFFICIENT_BITS:
                self._fail(f"coefficients would exceed {MAX_PARSE_COEFFICIENT_BITS} bits")
            result = {self.one: Fraction(1)}
            for _ in range(exponent):
                result = self._multiply(result, base)
            return result
        return base

    def _atom(self):
        kind, value = self._take()
        if kind == "number":
            if len(value) > 1000:
                self._fail("integer literal too long")
            return {self.one: Fraction(int(value))} if int(value) else {}
        if kind == "name":
            match = re.fullmatch(rf"{self.variable}(\d+)", value)
            if not match or int(match.group(1)) > self.n:
                self._fail(f"unknown variable {value} (allowed: {self.variable}0..{self.variable}{self.n})")
            exponents = [0] * (self.n + 1)
            exponents[int(match.group(1))] = 1
            return {tuple(exponents): Fraction(1)}
        if (kind, value) == ("op", "("):
            poly = self._expr()
            if self._take() != ("op", ")"):
                self._fail("missing ')'")
            return poly
        self._fail("unexpected end of input" if kind is None else f"unexpected {value!r}")


def _parse_terms(text, n, variable, field):
    try:
        poly = _FormParser(text, n, variable).parse()
    except RecursionError:
        raise ParseError(f"cannot parse {text[:40]!r}...: nested too deeply") from None
    terms = {}
    for exponents, value in poly.items():
        value = field.element(value)
        if value:
            terms[exponents] = value
    return terms


def _single_degree(terms, text):
    degrees = {sum(m) for m in terms}
    if len(degrees) > 1:
        raise ParseError(f"{text!r} is not homogeneous (term degrees {sorted(degrees)})")
    return degrees.pop() if degrees else None


def parse_form(text, n, d=None, field=QQ, allow_zero=False):
    """Parse a homogeneous form of degree d in x0..xn (d=None reads the degree off the terms)."""
    terms = _parse_terms(text, n, "x", field)
    degree = _single_degree(terms, text)
    if degree is None:
        if not allow_zero or d is None:
            raise ZeroFormError(f"{text!r} is the zero polynomial")
        return HomogeneousForm.zero(n, d, field)
    if d is not None and degree != d:
        raise ParseError(f"{text!r} has degree {degree}, expected {d}")
    return HomogeneousForm(n, degree, terms, field)


def parse_dual_form(text, n, field=QQ):
    """Parse a nonzero homogeneous dual form in y0..yn; the degree is read off the terms."""
    terms = _parse_terms(text, n, "y", field)
    degree = _single_degree(terms, text)
    if degree is None:
        raise ZeroFormError(f"{text!r} is the zero polynomial")
    return DualForm(n, degree, terms, field)


def format_form(form):
    """Canonical text: graded-lex descending terms, parseable by parse_form."""
    if form.is_zero:
        return "0"
    pieces = []
    for m in monomials(form.n, form.d):
        value = form.terms.get(m)
        if value is None:
            continue
        negative = form.field.is_rational and value < 0
        magnitude = -value if negative else value
        mono = format_monomial(m, form.VARIABLE)
        if mono == "1":
            body = form.field.format(magnitude)
        elif magnitude == 1:
            body = mono
        else:
            body = f"{form.field.format(magnitude)}*{mono}"
        if not pieces:
            pieces.append(f"-{body}" if negative else body)
        else:
            pieces.append(f" - {body}" if negative else f" + {body}")
    return "".join(pieces)


# ----------------------------------------------------------------------
# Contraction
# ----------------------------------------------------------------------

def pairing_weight(alpha, beta, pairing):
    """Scalar in front of x^(alpha-beta) when y^beta contracts x^alpha."""
    if pairing == "coefficient":
        return 1
    weight = 1
    for a, b in zip(alpha, beta):
        if b:
            weight *= perm(a, b)
    return weight


def check_pairing(pairing):
    if pairing not in PAIRINGS:
        raise InvalidParameterError(f"unknown pairing {pairing!r} (choose from {', '.join(PAIRINGS)})")


def contract(dual, form, pairing=DEFAULT_PAIRING):
    """dual ⌟ form, a form of degree d - a.

    On monomials y^b ⌟ x^a is x^(a-b) when b <= a componentwise and 0 otherwise,
    multiplied by a!/(a-b)! under the differential pairing.
    """
    check_pairing(pairing)
    if not isinstance(dual, DualForm) or not isinstance(form, HomogeneousForm):
        raise MalformedInputError("contract takes a DualForm and a HomogeneousForm")
    if dual.n != form.n:
        raise DimensionMismatchError(f"dual form in {dual.n + 1} variables, form in {form.n + 1}")
    if dual.field != form.field:
        raise MalformedInputError(f"dual form over {dual.field.tag}, form over {form.field.tag}")
    if dual.d > form.d:
        raise DegreeError(f"cannot contract a degree-{form.d} form by a degree-{dual.d} dual form")
    field = form.field
    result = {}
    for beta, c in dual.terms.items():
        for alpha, f in form.terms.items():
            if any(b > a for a, b in zip(alpha, beta)):
                continue
            gamma = tuple(a - b for a, b in zip(alpha, beta))
            value = field.mul(c, f)
            weight = pairing_weight(alpha, beta, pairing)
            if weight != 1:
                value = field.mul(value, field.element(weight))
            result[gamma] = field.add(result.get(gamma, field.zero), value)
    return HomogeneousForm(form.n, form.d - dual.d, result, field)


def power_of_linear(point, d):
    """(c0 x0 + ... + cn xn)^d with exact multinomial coefficients."""
    if d < 1:
        raise InvalidParameterError(f"power_of_linear needs d >= 1, got {d}")
    field = point.field
    terms = {}
    for exponents, multinomial in multinomial_coefficients(point.n + 1, d).items():
        value = field.element(multinomial)
        for c, e in zip(point.coords, exponents):
            if e:
                value = field.mul(value, field.power(c, e))
        if value:
            terms[tuple(exponents)] = value
    return HomogeneousForm(point.n, d, terms, field)


def divided_power_of_linear(point, d):
    """sum over |a| = d of l^a x^a, i.e. l^d without multinomial coefficients."""
    if d < 1:
        raise InvalidParameterError(f"divided_power_of_linear needs d >= 1, got {d}")
    field = point.field
    terms = {}
    for exponents in monomials(point.n, d):
        value = field.one
        for c, e in zip(point.coords, exponents):
            if e:
                value = field.mul(value, field.power(c, e))
        if value:
            terms[exponents] = value
    return HomogeneousForm(point.n, d, terms, field)


def veronese_point(point, d, pairing=DEFAULT_PAIRING):
    """The form representing [l] on the Veronese for the given pairing.

    Under the differential pairing this is l^d; under the coefficient pairing
    the divided power plays that role (it is what the coefficient pairing
    annihilates with the ideal of [l]).
    """
    check_pairing(pairing)
    if pairing == "coefficient":
        return divided_power_of_linear(point, d)
    return power_of_linear(point, d)


def random_form(n, d, field=QQ, seed=DEFAULT_SEED, coeff_bound=DEFAULT_COEFF_BOUND):
    """Every degree-d monomial gets an integer coefficient in [-coeff_bound, coeff_bound]."""
    if coeff_bound < 1:
        raise InvalidParameterError(f"coeff_bound must be at least 1, got {coeff_bound}")
    rng = np.random.default_rng(seed)
    basis = monomials(n, d)
    draws = rng.integers(-coeff_bound, coeff_bound, size=len(basis), endpoint=True)
    return HomogeneousForm(n, d, {m: field.element(int(c)) for m, c in zip(basis, draws) if c}, field)


def random_point(n, rng, field=QQ, bound=None):
    """A random LinearPoint with integer coordinates in [-bound, bound]."""
    bound = POINT_COORD_BOUND if bound is None else bound
    while True:
        coords = [int(c) for c in rng.integers(-bound, bound, size=n + 1, endpoint=True)]
        if any(field.element(c) for c in coords):
            return LinearPoint(coords, field)
