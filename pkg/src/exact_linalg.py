#!/usr/bin/env python3
"""
Exact scalar arithmetic and sparse linear algebra over Q and F_p.

Rational ranks are computed by fraction-free (Bareiss) elimination on rows
scaled to integers; prime-field ranks by plain elimination mod p. Every
elimination picks the shortest remaining row as pivot row (lowest index on
ties) and that row's first nonzero column as pivot column, so pivots, witness
minors and kernels are reproducible bit for bit.

Ranks of matrices with rational entries do not change under field extension,
so Q (and F_p as a fast path) stand in for the algebraically closed field of
the geometry everywhere.
"""

import math
import numbers
from fractions import Fraction
from functools import lru_cache
from types import MappingProxyType

import numpy as np
from sympy import isprime, prevprime

from config import DEFAULT_SEED, MODULAR_PRIME_BITS, MODULAR_PRIME_BUDGET, MODULAR_PRIME_POOL_SIZE
from errors import (ConsistencyError, DimensionMismatchError, InvalidParameterError,
                    MalformedInputError, NoWitnessError)


class Field:
    """The rationals (characteristic 0) or the prime field F_p.

    Scalars are plain Python values: ``Fraction`` in lowest terms for Q,
    ``int`` residues in [0, p) for F_p. A container (matrix, form) carries one
    Field and every value it stores is an element of it.
    """

    __slots__ = ("characteristic",)

    def __init__(self, characteristic=0):
        if characteristic != 0 and not isprime(characteristic):
            raise InvalidParameterError(f"field characteristic {characteristic} is not a prime")
        self.characteristic = int(characteristic)

    @classmethod
    def from_tag(cls, tag):
        """Inverse of ``tag``: "Q" or "Fp:<p>"."""
        if tag == "Q":
            return QQ
        if tag.startswith("Fp:"):
            try:
                return GF(int(tag[3:]))
            except ValueError:
                pass
        raise MalformedInputError(f"unknown field tag {tag!r}")

    @property
    def is_rational(self):
        return self.characteristic == 0

    @property
    def tag(self):
        return "Q" if self.is_rational else f"Fp:{self.characteristic}"

    def element(self, value):
        """Coerce an int, Fraction or "p/q" string into this field."""
        if isinstance(value, bool):
            raise MalformedInputError(f"{value!r} is not a field element")
        if isinstance(value, numbers.Integral):
            value = int(value)
        try:
            q = value if isinstance(value, Fraction) else Fraction(value)
        except (TypeError, ValueError, ZeroDivisionError):
            raise MalformedInputError(f"{value!r} is not an exact scalar") from None
        if self.is_rational:
            return q
        p = self.characteristic
        if q.denominator % p == 0:
            raise MalformedInputError(f"{value} has a denominator divisible by {p}")
        return q.numerator * pow(q.denominator, -1, p) % p

    def is_element(self, value):
        if self.is_rational:
            return type(value) is Fraction
        return type(value) is int and 0 <= value < self.characteristic

    @property
    def zero(self):
        return Fraction(0) if self.is_rational else 0

    @property
    def one(self):
        return Fraction(1) if self.is_rational else 1

    def add(self, a, b):
        return a + b if self.is_rational else (a + b) % self.characteristic

    def sub(self, a, b):
        return a - b if self.is_rational else (a - b) % self.characteristic

    def mul(self, a, b):
        return a * b if self.is_rational else a * b % self.characteristic

    def neg(self, a):
        return -a if self.is_rational else -a % self.characteristic

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero")
        return 1 / a if self.is_rational else pow(a, -1, self.characteristic)

    def power(self, a, k):
        return a ** k if self.is_rational else pow(a, k, self.characteristic)

    def format(self, a):
        return str(a)

    def __eq__(self, other):
        return isinstance(other, Field) and other.characteristic == self.characteristic

    def __hash__(self):
        return hash(("Field", self.characteristic))

    def __repr__(self):
        return "QQ" if self.is_rational else f"GF({self.characteristic})"


QQ = Field(0)


@lru_cache(maxsize=None)
def GF(p):
    """The prime field F_p (cached, so equal fields are usually identical objects)."""
    return Field(p)


class SparseMatrix:
    """Immutable coordinate-map matrix over one Field.

    ``entries`` maps (row, col) to a nonzero field element; zeros passed to
    the constructor are dropped. Labels, when given, name the basis vectors
    indexing rows and columns.
    """

    __slots__ = ("nrows", "ncols", "field", "row_labels", "col_labels", "_entries")

    def __init__(self, nrows, ncols, entries=None, field=QQ, row_labels=None, col_labels=None):
        if nrows < 0 or ncols < 0:
            raise MalformedInputError(f"negative matrix shape {nrows}x{ncols}")
        self.nrows = nrows
        self.ncols = ncols
        self.field = field
        stored = {}
        for (r, c), value in (entries or {}).items():
            if not (0 <= r < nrows and 0 <= c < ncols):
                raise MalformedInputError(f"entry ({r}, {c}) outside a {nrows}x{ncols} matrix")
            if not field.is_element(value):
                raise MalformedInputError(f"entry ({r}, {c}) = {value!r} is not an element of {field.tag}")
            if value:
                stored[(r, c)] = value
        self._entries = stored
        self.row_labels = self._check_labels(row_labels, nrows, "row")
        self.col_labels = self._check_labels(col_labels, ncols, "column")

    @staticmethod
    def _check_labels(labels, count, kind):
        if labels is None:
            return None
        labels = tuple(labels)
        if len(labels) != count:
            raise MalformedInputError(f"{len(labels)} {kind} labels for {count} {kind}s")
        if len(set(labels)) != count:
            raise MalformedInputError(f"{kind} labels are not pairwise distinct")
        return labels

    @classmethod
    def from_rows(cls, rows, field=QQ, ncols=None):
        """Build from dense rows of ints / Fractions / "p/q" strings."""
        rows = [list(row) for row in rows]
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        entries = {}
        for r, row in enumerate(rows):
            if len(row) != ncols:
                raise MalformedInputError(f"row {r} has {len(row)} entries, expected {ncols}")
            for c, value in enumerate(row):
                value = field.element(value)
                if value:
                    entries[(r, c)] = value
        return cls(len(rows), ncols, entries, field)

    @classmethod
    def identity(cls, n, field=QQ):
        return cls(n, n, {(i, i): field.one for i in range(n)}, field)

    @classmethod
    def zero(cls, nrows, ncols, field=QQ):
        return cls(nrows, ncols, {}, field)

    @property
    def entries(self):
        return MappingProxyType(self._entries)

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    @property
    def nnz(self):
        return len(self._entries)

    def entry(self, r, c):
        return self._entries.get((r, c), self.field.zero)

    def row_maps(self):
        """One {col: value} dict per row."""
        rows = [{} for _ in range(self.nrows)]
        for (r, c), value in self._entries.items():
            rows[r][c] = value
        return rows

    def to_dense(self):
        dense = [[self.field.zero] * self.ncols for _ in range(self.nrows)]
        for (r, c), value in self._entries.items():
            dense[r][c] = value
        return dense

    def transpose(self):
        return SparseMatrix(self.ncols, self.nrows, {(c, r): v for (r, c), v in self._entries.items()},
                            self.field, self.col_labels, self.row_labels)

    def submatrix(self, rows, cols):
        rows, cols = list(rows), list(cols)
        row_pos = {r: i for i, r in enumerate(rows)}
        col_pos = {c: j for j, c in enumerate(cols)}
        entries = {(row_pos[r], col_pos[c]): v for (r, c), v in self._entries.items()
                   if r in row_pos and c in col_pos}
        return SparseMatrix(len(rows), len(cols), entries, self.field)

    def scale(self, factor):
        factor = self.field.element(factor)
        entries = {key: self.field.mul(v, factor) for key, v in self._entries.items()}
        return SparseMatrix(self.nrows, self.ncols, entries, self.field, self.row_labels, self.col_labels)

    def __add__(self, other):
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        if other.field != self.field:
            raise MalformedInputError(f"cannot add matrices over {self.field.tag} and {other.field.tag}")
        if other.shape != self.shape:
            raise DimensionMismatchError(f"cannot add {self.shape} and {other.shape} matrices")
        entries = dict(self._entries)
        for key, value in other._entries.items():
            entries[key] = self.field.add(entries.get(key, self.field.zero), value)
        return SparseMatrix(self.nrows, self.ncols, entries, self.field, self.row_labels, self.col_labels)

    def __eq__(self, other):
        return (isinstance(other, SparseMatrix) and self.shape == other.shape
                and self.field == other.field and self._entries == other._entries)

    def __hash__(self):
        return hash((self.shape, self.field, frozenset(self._entries.items())))

    def __repr__(self):
        return f"SparseMatrix({self.nrows}x{self.ncols}, nnz={self.nnz}, field={self.field.tag})"

    def format_table(self):
        """Plain-text rendering with labels, for --verbose output."""
        dense = self.to_dense()
        cells = [[self.field.format(v) if v else "." for v in row] for row in dense]
        col_heads = list(self.col_labels) if self.col_labels else [str(c) for c in range(self.ncols)]
        row_heads = list(self.row_labels) if self.row_labels else [str(r) for r in range(self.nrows)]
        width = max([len(s) for row in cells for s in row] + [len(h) for h in col_heads] + [1])
        head_width = max([len(h) for h in row_heads] + [1])
        lines = [" " * head_width + " " + " ".join(h.rjust(width) for h in col_heads)]
        for head, row in zip(row_heads, cells):
            lines.append(head.rjust(head_width) + " " + " ".join(s.rjust(width) for s in row))
        return "\n".join(lines)


# ----------------------------------------------------------------------
# Elimination kernels. All of them work on lists of {col: value} rows.
# ----------------------------------------------------------------------

def _integer_rows(matrix):
    """Rational rows scaled by their denominator lcm; also returns the scale factors."""
    rows, scales = [], []
    for row in matrix.row_maps():
        m = math.lcm(*(v.denominator for v in row.values())) if row else 1
        rows.append({c: v.numerator * (m // v.denominator) for c, v in row.items()})
        scales.append(m)
    return rows, scales


def _next_pivot_row(active):
    return min(active, key=lambda k: (len(active[k]), k))


def _bareiss_pivots(rows):
    """Fraction-free elimination on integer rows.

    Returns the (row, col) pivot sequence and the last pivot value, which is
    the determinant of the pivot submatrix taken in pivot order.
    """
    active = {i: dict(row) for i, row in enumerate(rows) if row}
    pivots = []
    previous = 1
    while active:
        i = _next_pivot_row(active)
        pivot_row = active.pop(i)
        c = min(pivot_row)
        pivot = pivot_row[c]
        pivots.append((i, c))
        remaining = {}
        for k, row in active.items():
            a = row.get(c, 0)
            if a:
                updated = {j: pivot * v for j, v in row.items()}
                for j, v in pivot_row.items():
                    updated[j] = updated.get(j, 0) - a * v
                # Sylvester's identity: every entry is a minor, so the division is exact
                row = {j: w // previous for j, w in updated.items() if w}
            elif pivot != previous:
                row = {j: v * pivot // previous for j, v in row.items()}
            if row:
                remaining[k] = row
        active = remaining
        previous = pivot
    return pivots, previous


def _modular_pivots(rows, p):
    """Elimination mod p; returns the pivot sequence and the pivot values."""
    active = {}
    for i, row in enumerate(rows):
        reduced = {c: v % p for c, v in row.items() if v % p}
        if reduced:
            active[i] = reduced
    pivots, values = [], []
    while active:
        i = _next_pivot_row(active)
        pivot_row = active.pop(i)
        c = min(pivot_row)
        pivots.append((i, c))
        values.append(pivot_row[c])
        inverse = pow(pivot_row[c], -1, p)
        remaining = {}
        for k, row in active.items():
            a = row.get(c)
            if a:
                factor = a * inverse % p
                row = dict(row)
                for j, v in pivot_row.items():
                    w = (row.get(j, 0) - factor * v) % p
                    if w:
                        row[j] = w
                    else:
                        row.pop(j, None)
            if row:
                remaining[k] = row
        active = remaining
    return pivots, values


def _rational_pivots(rows):
    """Textbook elimination with Fraction arithmetic (the oracle for Bareiss)."""
    active = {i: dict(row) for i, row in enumerate(rows) if row}
    pivots = []
    while active:
        i = _next_pivot_row(active)
        pivot_row = active.pop(i)
        c = min(pivot_row)
        pivots.append((i, c))
        remaining = {}
        for k, row in active.items():
            a = row.get(c)
            if a:
                factor = a / pivot_row[c]
                row = dict(row)
                for j, v in pivot_row.items():
                    w = row.get(j, 0) - factor * v
                    if w:
                        row[j] = w
                    else:
                        row.pop(j, None)
            if row:
                remaining[k] = row
        active = remaining
    return pivots


def _axpy(target, coefficient, source, field):
    """target += coefficient * source, in place, dropping zeros."""
    for j, v in source.items():
        w = field.add(target.get(j, field.zero), field.mul(coefficient, v))
        if w:
            target[j] = w
        else:
            target.pop(j, None)


def _reduced_echelon(rows, field):
    """Gauss-Jordan elimination; returns {pivot col: row} with unit pivots, fully reduced."""
    basis = {}
    for i in sorted(range(len(rows)), key=lambda k: (len(rows[k]), k)):
        row = dict(rows[i])
        for c in sorted(set(row) & set(basis)):
            a = row.get(c)
            if a:
                _axpy(row, field.neg(a), basis[c], field)
        if not row:
            continue
        lead = min(row)
        inverse = field.inv(row[lead])
        row = {j: field.mul(v, inverse) for j, v in row.items()}
        for other in basis.values():
            a = other.get(lead)
            if a:
                _axpy(other, field.neg(a), row, field)
        basis[lead] = row
    return dict(sorted(basis.items()))


def _pivots(matrix):
    if matrix.field.is_rational:
        rows, _ = _integer_rows(matrix)
        return _bareiss_pivots(rows)[0]
    return _modular_pivots(matrix.row_maps(), matrix.field.characteristic)[0]


def _permutation_sign(sequence):
    inversions = sum(1 for i in range(len(sequence)) for j in range(i + 1, len(sequence))
                     if sequence[i] > sequence[j])
    return -1 if inversions % 2 else 1


def _check_matrix(matrix):
    if not isinstance(matrix, SparseMatrix):
        raise MalformedInputError(f"expected a SparseMatrix, got {type(matrix).__name__}")
    for value in matrix.entries.values():
        if not matrix.field.is_element(value):
            raise MalformedInputError(f"matrix mixes fields: {value!r} is not in {matrix.field.tag}")


# ----------------------------------------------------------------------
# Public operations
# ----------------------------------------------------------------------

def rank(matrix, method="fraction-free"):
    """Exact rank over the matrix's field.

    ``method="naive"`` runs Fraction-based elimination instead of Bareiss on
    rational matrices; both give the same number.
    """
    _check_matrix(matrix)
    if method == "naive" and matrix.field.is_rational:
        return len(_rational_pivots(matrix.row_maps()))
    if method not in ("fraction-free", "naive"):
        raise InvalidParameterError(f"unknown elimination method {method!r}")
    return len(_pivots(matrix))


def rank_with_witness(matrix):
    """Rank plus sorted row and column indices of a nonsingular rank x rank submatrix."""
    _check_matrix(matrix)
    pivots = _pivots(matrix)
    return (len(pivots), tuple(sorted(r for r, _ in pivots)), tuple(sorted(c for _, c in pivots)))


def determinant(matrix):
    """Exact determinant of a square matrix."""
    _check_matrix(matrix)
    if matrix.nrows != matrix.ncols:
        raise DimensionMismatchError(f"determinant of a non-square {matrix.nrows}x{matrix.ncols} matrix")
    n = matrix.nrows
    field = matrix.field
    if n == 0:
        return field.one
    if field.is_rational:
        rows, scales = _integer_rows(matrix)
        pivots, last = _bareiss_pivots(rows)
        if len(pivots) < n:
            return field.zero
        sign = _permutation_sign([r for r, _ in pivots]) * _permutation_sign([c for _, c in pivots])
        return Fraction(sign * last, math.prod(scales))
    p = field.characteristic
    pivots, values = _modular_pivots(matrix.row_maps(), p)
    if len(pivots) < n:
        return field.zero
    sign = _permutation_sign([r for r, _ in pivots]) * _permutation_sign([c for _, c in pivots])
    return sign * math.prod(values) % p


def kernel_basis(matrix):
    """Basis of the right kernel {v : M v = 0} as dense coordinate vectors."""
    _check_matrix(matrix)
    field = matrix.field
    echelon = _reduced_echelon(matrix.row_maps(), field)
    basis = []
    for free in range(matrix.ncols):
        if free in echelon:
            continue
        vector = [field.zero] * matrix.ncols
        vector[free] = field.one
        for pivot_col, row in echelon.items():
            a = row.get(free)
            if a:
                vector[pivot_col] = field.neg(a)
        basis.append(vector)
    return basis


def row_echelon_basis(matrix):
    """Reduced row-echelon basis of the row space, ordered by pivot column."""
    _check_matrix(matrix)
    field = matrix.field
    basis = []
    for row in _reduced_echelon(matrix.row_maps(), field).values():
        vector = [field.zero] * matrix.ncols
        for c, v in row.items():
            vector[c] = v
        basis.append(vector)
    return basis


def span_intersection(first, second):
    """Basis (reduced echelon) of rowspace(first) ∩ rowspace(second)."""
    _check_matrix(first)
    _check_matrix(second)
    if first.field != second.field:
        raise MalformedInputError(f"cannot intersect spans over {first.field.tag} and {second.field.tag}")
    if first.ncols != second.ncols:
        raise DimensionMismatchError(f"row spaces of width {first.ncols} and {second.ncols}")
    field = first.field
    if first.nrows == 0 or second.nrows == 0:
        return []
    # Columns of the stacked system are the generating vectors of both spans;
    # a kernel vector (l, m) says sum l_i A_i = sum m_j B_j.
    stacked = {}
    for (r, c), v in first.entries.items():
        stacked[(c, r)] = v
    for (r, c), v in second.entries.items():
        stacked[(c, first.nrows + r)] = field.neg(v)
    system = SparseMatrix(first.ncols, first.nrows + second.nrows, stacked, field)
    first_rows = first.row_maps()
    combos = []
    for solution in kernel_basis(system):
        combined = {}
        for i, weight in enumerate(solution[:first.nrows]):
            if weight:
                _axpy(combined, weight, first_rows[i], field)
        if combined:
            combos.append(combined)
    if not combos:
        return []
    return row_echelon_basis(SparseMatrix(len(combos), first.ncols,
                                          {(i, c): v for i, row in enumerate(combos) for c, v in row.items()},
                                          field))


def witness_minor(matrix, r):
    """Row and column indices (each of size r) of a submatrix with nonzero determinant."""
    if r < 0:
        raise InvalidParameterError(f"witness size must be nonnegative, got {r}")
    _check_matrix(matrix)
    full_rank_pivots = _pivots(matrix)
    if r > len(full_rank_pivots):
        raise NoWitnessError(f"no {r}x{r} witness minor: the matrix has rank {len(full_rank_pivots)}")
    chosen = full_rank_pivots[:r]
    rows = tuple(sorted(i for i, _ in chosen))
    cols = tuple(sorted(c for _, c in chosen))
    if r and not determinant(matrix.submatrix(rows, cols)):
        raise ConsistencyError(f"selected {r}x{r} pivot submatrix is singular")
    return rows, cols


@lru_cache(maxsize=None)
def modular_prime_pool(count=MODULAR_PRIME_POOL_SIZE, bits=MODULAR_PRIME_BITS):
    """The first ``count`` primes below 2**bits, largest first."""
    primes = []
    p = 2 ** bits
    while len(primes) < count:
        p = prevprime(p)
        primes.append(p)
    return tuple(primes)


def _rows_in_span(rows, selected):
    """True iff every row lies in the rational span of the selected rows."""
    basis = _reduced_echelon([{c: Fraction(v) for c, v in rows[i].items()} for i in selected], QQ)
    chosen = set(selected)
    for i, row in enumerate(rows):
        if i in chosen or not row:
            continue
        residual = {c: Fraction(v) for c, v in row.items()}
        for c in sorted(set(residual) & set(basis)):
            a = residual.get(c)
            if a:
                _axpy(residual, -a, basis[c], QQ)
        if residual:
            return False
    return True


def rank_mod_certified(matrix, prime_budget=MODULAR_PRIME_BUDGET, seed=DEFAULT_SEED, primes=None):
    """Rational rank through the modular fast path, never wrong.

    For each sampled prime p (primes dividing a denominator are skipped) the
    rank r_p over F_p is certified as the rational rank by (1) a nonzero
    rational r_p x r_p minor on the modular pivots and (2) every other row
    reducing to zero against the r_p pivot rows over Q. When the budget runs
    out, full rational elimination decides.
    """
    _check_matrix(matrix)
    if not matrix.field.is_rational:
        raise MalformedInputError("rank_mod_certified needs a matrix over Q")
    int_rows, _ = _integer_rows(matrix)
    denominators = math.lcm(1, *(v.denominator for v in matrix.entries.values()))
    pool = tuple(primes) if primes is not None else modular_prime_pool()
    order = np.random.default_rng(seed).permutation(len(pool))
    tried = 0
    for index in order:
        if tried >= prime_budget:
            break
        p = int(pool[int(index)])
        if denominators % p == 0:
            continue
        tried += 1
        pivots, _ = _modular_pivots(int_rows, p)
        r = len(pivots)
        rows = sorted(i for i, _ in pivots)
        cols = sorted(c for _, c in pivots)
        if r and not determinant(matrix.submatrix(rows, cols)):
            continue
        if _rows_in_span(int_rows, rows):
            return r
    return rank(matrix)
