#!/usr/bin/env python3

from config import EXIT_CONSISTENCY, EXIT_USAGE


class FlatlabError(Exception):
    """Base class for every error FlatLab raises on purpose."""

    exit_code = EXIT_USAGE


class MalformedInputError(FlatlabError):
    """Values that break a container invariant (mixed fields, bad labels, ...)."""


class ParseError(FlatlabError):
    """Text that does not follow the polynomial, ideal or decomposition grammar."""


class DegreeError(FlatlabError):
    """Degrees that do not fit together, e.g. contracting by a form of higher degree."""


class DimensionMismatchError(FlatlabError):
    """Objects living over different numbers of variables or degrees."""


class InvalidParameterError(FlatlabError):
    """A parameter outside its documented range."""


class ZeroFormError(FlatlabError):
    """The zero form where a nonzero one is required."""


class NoWitnessError(FlatlabError):
    """A witness minor of a size larger than the rank was requested."""


class UnstableHilbertError(FlatlabError):
    """The Hilbert function did not stabilize before t_max."""

    def __init__(self, message, profile=None):
        super().__init__(message)
        self.profile = profile


class UsageError(FlatlabError):
    """Command-line usage that argparse cannot catch on its own."""


class ConsistencyError(FlatlabError):
    """An internal cross-check failed; results can not be trusted."""

    exit_code = EXIT_CONSISTENCY
