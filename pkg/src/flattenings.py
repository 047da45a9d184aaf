#!/usr/bin/env python3
"""
Flattening matrices of a form F: classical catalecticants and Koszul
flattenings, their ranks, and the generic rank e they take on Veronese points.

A catalecticant Cat_a(F) is the contraction map S^a V* -> S^(d-a) V.
The Koszul flattening with parameters (p, a) is the map
    Λ^p V ⊗ S^a V*  ->  Λ^(p+1) V ⊗ S^(d-a-1) V,
    ω ⊗ D  ->  Σ_i (x_i ∧ ω) ⊗ ((D·y_i) ⌟ F),
whose rank at a point of the Veronese is e = C(n, p).

Rows of every matrix index the domain basis and columns the target basis,
both in the lex orders of ExteriorIndex.basis and poly_core.monomials.
"""

import re
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Optional

import numpy as np

from config import DEFAULT_PAIRING, DEFAULT_SEED, GRID_SIZE_CAP, POINT_RANK_CHECK_TRIALS
from errors import ConsistencyError, DimensionMismatchError, InvalidParameterError, ParseError
from exact_linalg import QQ, SparseMatrix, rank, rank_mod_certified
from poly_core import (DualForm, contract, format_monomial, monomial_index, monomials,
                       random_point, veronese_point)

SPEC_KINDS = ("cat", "koszul")


@dataclass(frozen=True)
class FlatteningSpec:
    """Which flattening to build: Catalecticant(a) or Koszul(p, a) of a degree-d form in x0..xn."""

    kind: str
    n: int
    d: int
    a: int
    p: Optional[int] = None

    def __post_init__(self):
        if self.kind not in SPEC_KINDS:
            raise InvalidParameterError(f"unknown flattening kind {self.kind!r}")
        if self.n < 0 or self.d < 1:
            raise InvalidParameterError(f"need n >= 0 and d >= 1, got n={self.n}, d={self.d}")
        if self.kind == "cat":
            if self.p is not None:
                raise InvalidParameterError("a catalecticant takes no exterior power p")
            if not 1 <= self.a <= self.d - 1:
                raise InvalidParameterError(f"catalecticant needs 1 <= a <= d-1 = {self.d - 1}, got a={self.a}")
        else:
            if self.p is None or not 0 <= self.p <= self.n:
                raise InvalidParameterError(f"Koszul flattening needs 0 <= p <= n = {self.n}, got p={self.p}")
            if self.a < 0 or self.a + 1 > self.d:
                raise InvalidParameterError(f"Koszul flattening needs 0 <= a <= d-1 = {self.d - 1}, got a={self.a}")

    @classmethod
    def catalecticant(cls, n, d, a):
        return cls("cat", n, d, a)

    @classmethod
    def koszul(cls, n, d, p, a):
        return cls("koszul", n, d, a, p)

    @property
    def e(self):
        """Rank of the flattening at a general Veronese point."""
        return 1 if self.kind == "cat" else comb(self.n, self.p)

    @property
    def label(self):
        return f"cat:{self.a}" if self.kind == "cat" else f"koszul:{self.p}:{self.a}"

    @property
    def shape(self):
        n, d, a = self.n, self.d, self.a
        if self.kind == "cat":
            return comb(n + a, n), comb(n + d - a, n)
        return comb(n + 1, self.p) * comb(n + a, n), comb(n + 1, self.p + 1) * comb(n + d - a - 1, n)

    @property
    def size(self):
        rows, cols = self.shape
        return rows * cols

    def to_dict(self):
        data = {"kind": self.kind, "a": self.a}
        if self.kind == "koszul":
            data["p"] = self.p
        return data

    def __str__(self):
        return f"Catalecticant({self.a})" if self.kind == "cat" else f"Koszul({self.p},{self.a})"


@dataclass(frozen=True, order=True)
class ExteriorIndex:
    """Basis vector x_i1 ∧ ... ∧ x_ip of Λ^p V, with i1 < ... < ip."""

    indices: tuple

    def __post_init__(self):
        indices = tuple(self.indices)
        if any(i < 0 for i in indices) or any(b <= a for a, b in zip(indices, indices[1:])):
            raise InvalidParameterError(f"exterior index {indices} is not strictly increasing")
        object.__setattr__(self, "indices", indices)

    @staticmethod
    def basis(n, p):
        return [ExteriorIndex(c) for c in combinations(range(n + 1), p)]

    @property
    def p(self):
        return len(self.indices)

    def insert(self, i):
        """x_i ∧ self as (sign, sorted index); sign 0 when i is already present."""
        if i in self.indices:
            return 0, None
        position = sum(1 for j in self.indices if j < i)
        return (-1) ** position, ExteriorIndex(tuple(sorted(self.indices + (i,))))

    def __str__(self):
        return "[" + ",".join(str(i) for i in self.indices) + "]"


def contraction_matrix(form, a, pairing=DEFAULT_PAIRING):
    """Matrix of D -> D ⌟ F from S^a V* to S^(d-a) V, for any 0 <= a <= d."""
    if not 0 <= a <= form.d:
        raise InvalidParameterError(f"contraction degree must lie in 0..{form.d}, got {a}")
    n, field = form.n, form.field
    domain = monomials(n, a)
    target = monomial_index(n, form.d - a)
    entries = {}
    for row, beta in enumerate(domain):
        image = contract(DualForm.monomial(beta, 1, field), form, pairing)
        for gamma, value in image.terms.items():
            entries[(row, target[gamma])] = value
    return SparseMatrix(len(domain), len(target), entries, field,
                        row_labels=[format_monomial(m, "y") for m in domain],
                        col_labels=[format_monomial(m, "x") for m in monomials(n, form.d - a)])


def catalecticant_matrix(form, a, pairing=DEFAULT_PAIRING):
    """Cat_a(F): rows y^b (|b| = a), columns x^c (|c| = d-a); 1 <= a <= d-1."""
    FlatteningSpec.catalecticant(form.n, form.d, a)
    return contraction_matrix(form, a, pairing)


def koszul_matrix(form, p, a, pairing=DEFAULT_PAIRING):
    """Koszul flattening of F with exterior power p and dual degree a."""
    FlatteningSpec.koszul(form.n, form.d, p, a)
    n, field = form.n, form.field
    domain_wedges = ExteriorIndex.basis(n, p)
    domain_monos = monomials(n, a)
    target_wedges = ExteriorIndex.basis(n, p + 1)
    target_monos = monomials(n, form.d - a - 1)
    wedge_pos = {w: i for i, w in enumerate(target_wedges)}
    mono_pos = monomial_index(n, form.d - a - 1)
    width = len(target_monos)

    images = {}

    def image_of(beta, i):
        shifted = tuple(b + (1 if j == i else 0) for j, b in enumerate(beta))
        if shifted not in images:
            images[shifted] = contract(DualForm.monomial(shifted, 1, field), form, pairing)
        return images[shifted]

    entries = {}
    row = 0
    for omega in domain_wedges:
        for beta in domain_monos:
            for i in range(n + 1):
                sign, wedge = omega.insert(i)
                if not sign:
                    continue
                base = wedge_pos[wedge] * width
                for gamma, value in image_of(beta, i).terms.items():
                    col = base + mono_pos[gamma]
                    term = value if sign > 0 else field.neg(value)
                    total = field.add(entries.get((row, col), field.zero), term)
                    if total:
                        entries[(row, col)] = total
                    else:
                        entries.pop((row, col), None)
            row += 1
    return SparseMatrix(row, len(target_wedges) * width, entries, field,
                        row_labels=[f"{w}|{format_monomial(m, 'y')}" for w in domain_wedges for m in domain_monos],
                        col_labels=[f"{w}|{format_monomial(m, 'x')}" for w in target_wedges for m in target_monos])


def flattening_matrix(form, spec, pairing=DEFAULT_PAIRING):
    _check_spec_matches(form, spec)
    if spec.kind == "cat":
        return catalecticant_matrix(form, spec.a, pairing)
    return koszul_matrix(form, spec.p, spec.a, pairing)


def _check_spec_matches(form, spec):
    if form.n != spec.n or form.d != spec.d:
        raise DimensionMismatchError(f"{spec.label} is set up for n={spec.n}, d={spec.d}; "
                                     f"the form has n={form.n}, d={form.d}")


def flattening_rank(form, spec, pairing=DEFAULT_PAIRING, modular=False):
    """Exact rank of the spec's matrix at F (modular=True takes the certified modular path over Q)."""
    matrix = flattening_matrix(form, spec, pairing)
    if modular and matrix.field.is_rational:
        return rank_mod_certified(matrix)
    return rank(matrix)


def point_rank(spec, trials=POINT_RANK_CHECK_TRIALS, seed=DEFAULT_SEED, field=QQ, pairing=DEFAULT_PAIRING):
    """Largest rank of the spec's matrix over `trials` random Veronese points."""
    if trials < 1:
        raise InvalidParameterError(f"point_rank needs at least one trial, got {trials}")
    rng = np.random.default_rng(seed)
    best = 0
    for _ in range(trials):
        point = random_point(spec.n, rng, field)
        best = max(best, flattening_rank(veronese_point(point, spec.d, pairing), spec, pairing))
    return best


@lru_cache(maxsize=None)
def check_divisor(spec, pairing=DEFAULT_PAIRING):
    """Cross-check the hard-coded e against the rank at random points over Q."""
    observed = point_rank(spec, POINT_RANK_CHECK_TRIALS, DEFAULT_SEED, QQ, pairing)
    if observed != spec.e:
        raise ConsistencyError(f"{spec.label}: rank at Veronese points is {observed}, expected e={spec.e}")
    return observed


def default_spec_grid(n, d, size_cap=GRID_SIZE_CAP):
    """Catalecticants a = 1..d-1, then Koszul (p, a) for p = 1..n, a = 0..d-2, within size_cap."""
    if n < 1 or d < 2:
        raise InvalidParameterError(f"the default grid needs n >= 1 and d >= 2, got n={n}, d={d}")
    specs = [FlatteningSpec.catalecticant(n, d, a) for a in range(1, d)]
    specs += [FlatteningSpec.koszul(n, d, p, a) for p in range(1, n + 1) for a in range(0, d - 1)]
    return [spec for spec in specs if spec.size <= size_cap]


_SPEC_LABEL = re.compile(r"^\s*(cat|koszul)\s*:\s*(\d+)\s*(?::\s*(\d+)\s*)?$")


def parse_spec(label, n, d):
    """'cat:<a>' or 'koszul:<p>:<a>' for forms with the given n and d."""
    match = _SPEC_LABEL.match(label)
    if not match:
        raise ParseError(f"cannot read flattening {label!r} (expected cat:<a> or koszul:<p>:<a>)")
    kind, first, second = match.group(1), int(match.group(2)), match.group(3)
    if kind == "cat":
        if second is not None:
            raise ParseError(f"{label!r}: a catalecticant takes one parameter")
        return FlatteningSpec.catalecticant(n, d, first)
    if second is None:
        raise ParseError(f"{label!r}: a Koszul flattening takes p and a")
    return FlatteningSpec.koszul(n, d, first, int(second))
