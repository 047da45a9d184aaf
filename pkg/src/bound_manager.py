#!/usr/bin/env python3
"""
Certified lower bounds for cactus and Waring rank from flattening ranks.

If a flattening built from a bundle of rank e has rank k at F, then
cr(F) >= ceil(k / e), and r(F) >= cr(F). A Certificate records every
flattening that went into the number so it can be re-checked later.
"""

import enum
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

from apolarity import check_nonabelian, hilbert_function, in_span, length
from config import DEFAULT_PAIRING, DEFAULT_SEED, WITNESS_RANK_LIMIT
from errors import (ConsistencyError, DimensionMismatchError, InvalidParameterError,
                    MalformedInputError, ParseError, ZeroFormError)
from exact_linalg import QQ, Field, determinant, rank, rank_mod_certified, witness_minor
from flattenings import (FlatteningSpec, check_divisor, default_spec_grid, flattening_matrix,
                        flattening_rank)
from poly_core import HomogeneousForm, LinearPoint, check_pairing, format_form, power_of_linear

INTERPRETATION = "CactusAndWaring"


def ceil_div(k, e):
    return -(-k // e)


@dataclass(frozen=True)
class CertificateEntry:
    """One flattening: its shape, rank at F, divisor e and the bound ceil(rank / e)."""

    spec: FlatteningSpec
    rows: int
    cols: int
    rank: int
    e: int
    bound: int
    witness: Optional[tuple] = None

    def __post_init__(self):
        if self.e < 1:
            raise MalformedInputError(f"{self.spec.label}: divisor e must be positive, got {self.e}")
        if self.bound != ceil_div(self.rank, self.e):
            raise MalformedInputError(f"{self.spec.label}: bound {self.bound} != ceil({self.rank}/{self.e})")
        if self.witness is not None:
            rows, cols = self.witness
            if len(rows) != self.rank or len(cols) != self.rank:
                raise MalformedInputError(f"{self.spec.label}: witness minor is not {self.rank}x{self.rank}")
            object.__setattr__(self, "witness", (tuple(rows), tuple(cols)))

    def to_dict(self):
        data = self.spec.to_dict()
        data.update({"rows": self.rows, "cols": self.cols, "rank": self.rank, "e": self.e, "bound": self.bound})
        if self.witness is not None:
            data["witness"] = {"rows": list(self.witness[0]), "cols": list(self.witness[1])}
        return data


@dataclass(frozen=True)
class Certificate:
    form_digest: str
    n: int
    d: int
    field_tag: str
    entries: tuple
    best_bound: int
    pairing: str = DEFAULT_PAIRING
    interpretation: str = INTERPRETATION

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))
        expected = max((entry.bound for entry in self.entries), default=0)
        if self.best_bound != expected:
            raise MalformedInputError(f"best_bound {self.best_bound} is not the largest entry bound {expected}")

    def to_dict(self):
        return {
            "form": self.form_digest,
            "n": self.n,
            "d": self.d,
            "field": self.field_tag,
            "entries": [entry.to_dict() for entry in self.entries],
            "best_bound": self.best_bound,
            "pairing": self.pairing,
            "interpretation": self.interpretation,
        }


def serialize_certificate(certificate):
    """Canonical JSON: sorted keys, two-space indent, trailing newline."""
    assert certificate.entries, "a certificate needs at least one entry"
    return json.dumps(certificate.to_dict(), sort_keys=True, indent=2) + "\n"


def parse_certificate(text):
    """Inverse of serialize_certificate."""
    try:
        data = json.loads(text)
        n, d = int(data["n"]), int(data["d"])
        entries = []
        for item in data["entries"]:
            spec = FlatteningSpec(item["kind"], n, d, int(item["a"]), item.get("p"))
            witness = item.get("witness")
            entries.append(CertificateEntry(
                spec, int(item["rows"]), int(item["cols"]), int(item["rank"]), int(item["e"]),
                int(item["bound"]),
                (tuple(witness["rows"]), tuple(witness["cols"])) if witness is not None else None))
        return Certificate(data["form"], n, d, data["field"], tuple(entries), int(data["best_bound"]),
                           data.get("pairing", DEFAULT_PAIRING), data.get("interpretation", INTERPRETATION))
    except (KeyError, TypeError, ValueError) as e:
        raise ParseError(f"not a certificate: {e}") from None


def verify_certificate(form, certificate):
    """Recompute every entry of a certificate against F; True iff all of them hold."""
    if certificate.form_digest != format_form(form) or certificate.field_tag != form.field.tag:
        return False
    for entry in certificate.entries:
        matrix = flattening_matrix(form, entry.spec, certificate.pairing)
        if matrix.shape != (entry.rows, entry.cols) or rank(matrix) != entry.rank:
            return False
        if entry.witness is not None and entry.rank:
            if not determinant(matrix.submatrix(*entry.witness)):
                return False
    return True


@dataclass(frozen=True)
class Decomposition:
    """F = sum of coefficient * l^d over the terms, each l a canonical LinearPoint."""

    terms: tuple
    field: Field = QQ

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        seen = set()
        for coefficient, point in self.terms:
            if not coefficient:
                raise MalformedInputError("decomposition coefficients must be nonzero")
            if point in seen:
                raise MalformedInputError(f"point {point} appears twice in the decomposition")
            seen.add(point)

    @classmethod
    def from_raw_terms(cls, raw_terms, d, field=QQ):
        """Build from (coefficient, coordinates) pairs; coordinates need not be canonical.

        c * (s * l)^d = (c * s^d) * l^d, so each coefficient absorbs the
        d-th power of the leading coordinate divided out of its point.
        """
        terms = []
        for coefficient, coords in raw_terms:
            scale = LinearPoint.leading_coordinate(coords, field)
            point = LinearPoint(coords, field)
            terms.append((field.mul(field.element(coefficient), field.power(scale, d)), point))
        return cls(tuple(terms), field)

    @property
    def r(self):
        return len(self.terms)

    @property
    def n(self):
        return self.terms[0][1].n if self.terms else None

    def expand(self, d):
        n = self.n
        total = HomogeneousForm.zero(n, d, self.field)
        for coefficient, point in self.terms:
            total = total + power_of_linear(point, d).scale(coefficient)
        return total


class GapRegime(enum.Enum):
    INSUFFICIENT = "InsufficientFlattenings"
    NO_CLAIM = "NoClaim"

    def __str__(self):
        return self.value


def gap_regime(n, d, r):
    """Whether minors of vector-bundle flattenings provably fail to cut out σ_r(v_d(P^n)).

    True regime when d >= 2r - 1 and (n >= 6, r >= 14) or (n = 5, r >= 42)
    or (n = 4, r >= 140).
    """
    if n < 1 or d < 1 or r < 1:
        raise InvalidParameterError(f"need n, d, r >= 1, got n={n}, d={d}, r={r}")
    if d >= 2 * r - 1 and ((n >= 6 and r >= 14) or (n == 5 and r >= 42) or (n == 4 and r >= 140)):
        return GapRegime.INSUFFICIENT
    return GapRegime.NO_CLAIM


@dataclass(frozen=True)
class SchemeChain:
    """length(I) >= h^0(O(a)) - h^0(I_R(a)) >= rank Cat_a(F) for F in the span of R."""

    length: int
    hilbert_value: int
    flattening_rank: int
    in_span: bool

    @property
    def holds(self):
        return self.length >= self.hilbert_value >= self.flattening_rank


def scheme_chain(ideal, form, spec, pairing=DEFAULT_PAIRING):
    """Evaluate the three numbers of the chain; a broken chain for F in the span is an internal error."""
    if spec.kind != "cat":
        raise InvalidParameterError("the scheme chain is only computed for catalecticants")
    spanned = in_span(ideal, form, pairing)
    chain = SchemeChain(length(ideal), hilbert_function(ideal, spec.a),
                        flattening_rank(form, spec, pairing), spanned)
    if spanned and not chain.holds:
        report = check_nonabelian(ideal, form, spec, pairing)
        raise ConsistencyError(f"{spec.label}: chain {chain.length} >= {chain.hilbert_value} >= "
                               f"{chain.flattening_rank} fails for F in the span (containment {report.verdict()})")
    return chain


def satisfies_minor_equations(form, r, specs, pairing=DEFAULT_PAIRING):
    """True iff all (r*e + 1)-minors of every listed flattening vanish at F."""
    if r < 0:
        raise InvalidParameterError(f"r must be nonnegative, got {r}")
    return all(flattening_rank(form, spec, pairing) <= r * spec.e for spec in specs)


class BoundManager:
    """Computes certified rank lower bounds and checks decompositions against them."""

    def __init__(self, logging_manager=None, jobs=1, pairing=DEFAULT_PAIRING, modular=False, seed=DEFAULT_SEED):
        check_pairing(pairing)
        if jobs < 1:
            raise InvalidParameterError(f"--jobs must be at least 1, got {jobs}")
        self.logging_manager = logging_manager
        self.jobs = jobs
        self.pairing = pairing
        self.modular = modular
        self.seed = seed

    def _log(self, computation, details):
        if self.logging_manager:
            self.logging_manager.log_computation(computation, details)

    def _print(self, message):
        if self.logging_manager:
            self.logging_manager.tech_print(message)

    def _evaluate(self, form, spec, witnesses):
        matrix = flattening_matrix(form, spec, self.pairing)
        if self.modular and matrix.field.is_rational:
            k = rank_mod_certified(matrix, seed=self.seed)
        else:
            k = rank(matrix)
        want_witness = witnesses if witnesses is not None else k <= WITNESS_RANK_LIMIT
        witness = witness_minor(matrix, k) if want_witness else None
        return CertificateEntry(spec, matrix.nrows, matrix.ncols, k, spec.e, ceil_div(k, spec.e), witness)

    def cactus_lower_bound(self, form, specs, witnesses=None):
        """Certificate for cr(F) >= best_bound (hence r(F) >= best_bound).

        ``witnesses``: None attaches witness minors up to rank WITNESS_RANK_LIMIT,
        True always, False never.
        """
        specs = list(specs)
        if not specs:
            raise InvalidParameterError("cactus_lower_bound needs at least one flattening")
        if form.is_zero:
            raise ZeroFormError("rank bounds are only defined for a nonzero form")
        for spec in specs:
            if spec.n != form.n or spec.d != form.d:
                raise DimensionMismatchError(f"{spec.label} is set up for n={spec.n}, d={spec.d}; "
                                             f"the form has n={form.n}, d={form.d}")
        for spec in specs:
            check_divisor(spec, self.pairing)
        self._print(f"🧮 Evaluating {len(specs)} flattening(s) with {self.jobs} job(s)")

        def evaluate(spec):
            return self._evaluate(form, spec, witnesses)

        if self.jobs > 1:
            with ThreadPoolExecutor(max_workers=self.jobs) as pool:
                entries = list(pool.map(evaluate, specs))
        else:
            entries = [evaluate(spec) for spec in specs]

        for entry in entries:
            self._print(f"   {entry.spec.label}: {entry.rows}x{entry.cols}, rank {entry.rank}, bound {entry.bound}")
            if self.logging_manager:
                self.logging_manager.log_certificate_entry(entry)

        certificate = Certificate(format_form(form), form.n, form.d, form.field.tag, tuple(entries),
                                  max(entry.bound for entry in entries), self.pairing)
        self._log("CERTIFICATE", {"best_bound": certificate.best_bound, "entries": len(entries)})
        return certificate

    def verify_decomposition(self, form, decomposition, cross_check=True):
        """True iff sum lambda_i l_i^d == F exactly.

        On success the default-grid certificate (differential pairing) must not
        exceed r; a larger bound raises ConsistencyError.
        """
        if not decomposition.terms:
            raise InvalidParameterError("an empty decomposition certifies nothing")
        if decomposition.n != form.n:
            raise DimensionMismatchError(f"decomposition points have {decomposition.n + 1} coordinates, "
                                         f"the form has {form.n + 1} variables")
        if decomposition.field != form.field:
            raise MalformedInputError(f"decomposition over {decomposition.field.tag}, form over {form.field.tag}")
        matches = decomposition.expand(form.d) == form
        self._log("DECOMPOSITION_CHECK", {"r": decomposition.r, "matches": matches})
        if not matches or not cross_check or form.is_zero or form.n < 1 or form.d < 2:
            return matches
        if not form.field.is_rational and form.field.characteristic <= form.d:
            self._print("⚠️ Skipping the bound cross-check: characteristic does not exceed d")
            return matches
        checker = BoundManager(self.logging_manager, self.jobs, "differential", self.modular, self.seed)
        certificate = checker.cactus_lower_bound(form, default_spec_grid(form.n, form.d), witnesses=False)
        if certificate.best_bound > decomposition.r:
            raise ConsistencyError(f"certified lower bound {certificate.best_bound} exceeds the "
                                   f"{decomposition.r}-term decomposition")
        return matches


def cactus_lower_bound(form, specs, pairing=DEFAULT_PAIRING, witnesses=None, jobs=1):
    return BoundManager(pairing=pairing, jobs=jobs).cactus_lower_bound(form, specs, witnesses)


def verify_decomposition(form, decomposition, cross_check=True):
    return BoundManager().verify_decomposition(form, decomposition, cross_check)
