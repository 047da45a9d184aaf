#!/usr/bin/env python3
"""
Shared pytest setup for the FlatLab test scripts.
Puts src/ on sys.path so modules import by bare name, as app.py does.
"""

import os
import sys
from fractions import Fraction

import numpy as np
import pytest

SRC_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), '..', 'src')
if SRC_DIR not in sys.path:
    sys.path.insert(0, SRC_DIR)


@pytest.fixture
def rng():
    """Fixed-seed generator for property tests."""
    return np.random.default_rng(1234)


def random_fraction_rows(rng, nrows, ncols, density=0.6, bound=5):
    """Dense rows of small Fractions, roughly `density` of them nonzero."""
    rows = []
    for _ in range(nrows):
        row = []
        for _ in range(ncols):
            if rng.random() < density:
                row.append(Fraction(int(rng.integers(-bound, bound, endpoint=True)),
                                    int(rng.integers(1, 4, endpoint=True))))
            else:
                row.append(Fraction(0))
        rows.append(row)
    return rows


def random_low_rank_rows(rng, nrows, ncols, k, bound=3):
    """nrows x ncols product of random integer matrices of inner size k (rank <= k)."""
    left = rng.integers(-bound, bound, size=(nrows, k), endpoint=True)
    right = rng.integers(-bound, bound, size=(k, ncols), endpoint=True)
    return [[Fraction(int(sum(int(left[i, t]) * int(right[t, j]) for t in range(k))))
             for j in range(ncols)] for i in range(nrows)]


def write_text(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text, encoding='utf-8')
    return str(path)
