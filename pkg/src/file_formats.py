#!/usr/bin/env python3
"""
Readers for the text files the CLI takes.

  form file           one polynomial in x0..xn, may span several lines
  ideal file          one generator in y0..yn per line
  decomposition file  one term per line: ``coeff ; c0,c1,...,cn``
  certificate file    the JSON written by ``bound --json``

In every text file ``#`` starts a comment and blank lines are ignored.
"""

from apolarity import HomogeneousIdeal
from bound_manager import parse_certificate
from errors import MalformedInputError, ParseError, UsageError
from exact_linalg import QQ
from flattenings import parse_spec
from poly_core import infer_variable_count, parse_dual_form, parse_form


def _content_lines(path):
    try:
        with open(path, 'r', encoding='utf-8') as f:
            raw = f.read()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e}") from None
    lines = []
    for number, line in enumerate(raw.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if line:
            lines.append((number, line))
    return lines


def _resolve_n(n, inferred, path, variable):
    if n is None:
        if inferred is None:
            raise UsageError(f"{path}: no {variable}-variables to infer n from; pass --n")
        return inferred
    if inferred is not None and inferred > n:
        raise ParseError(f"{path}: uses {variable}{inferred} but n={n}")
    return n


def read_form_file(path, n=None, d=None, field=QQ):
    """The form in the file; n and d are inferred when not given."""
    lines = _content_lines(path)
    if not lines:
        raise UsageError(f"{path}: no polynomial found")
    text = " ".join(line for _, line in lines)
    n = _resolve_n(n, infer_variable_count(text, "x"), path, "x")
    return parse_form(text, n, d, field)


def read_ideal_file(path, n=None, field=QQ):
    """A HomogeneousIdeal with one generator per non-comment line."""
    lines = _content_lines(path)
    inferred = [infer_variable_count(line, "y") for _, line in lines]
    n = _resolve_n(n, max((i for i in inferred if i is not None), default=None), path, "y")
    generators = []
    for number, line in lines:
        try:
            generators.append(parse_dual_form(line, n, field))
        except ParseError as e:
            raise ParseError(f"{path}:{number}: {e}") from None
    return HomogeneousIdeal(n, generators, field)


def read_decomposition_file(path, field=QQ):
    """Raw (coefficient, coordinates) terms; canonicalization happens in Decomposition."""
    lines = _content_lines(path)
    if not lines:
        raise UsageError(f"{path}: empty decomposition")
    terms = []
    width = None
    for number, line in lines:
        if line.count(";") != 1:
            raise ParseError(f"{path}:{number}: expected 'coeff ; c0,c1,...,cn', got {line!r}")
        coefficient_text, point_text = (part.strip() for part in line.split(";"))
        try:
            coefficient = field.element(coefficient_text.replace(" ", ""))
            coords = [field.element(c.strip()) for c in point_text.split(",")]
        except MalformedInputError as e:
            raise ParseError(f"{path}:{number}: {e}") from None
        if width is not None and len(coords) != width:
            raise ParseError(f"{path}:{number}: {len(coords)} coordinates, previous lines have {width}")
        width = len(coords)
        terms.append((coefficient, coords))
    return terms


def parse_spec_list(text, n, d):
    """Comma-separated flattening labels such as ``cat:1,koszul:1:0``."""
    labels = [label.strip() for label in text.split(",") if label.strip()]
    if not labels:
        raise UsageError("--specs needs at least one flattening label")
    return [parse_spec(label, n, d) for label in labels]


def read_certificate_file(path):
    try:
        with open(path, 'r', encoding='utf-8') as f:
            text = f.read()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e}") from None
    try:
        return parse_certificate(text)
    except ParseError as e:
        raise ParseError(f"{path}: {e}") from None
