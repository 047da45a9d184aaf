#!/usr/bin/env python3

import warnings
from abc import ABC, abstractmethod

from config import MATRIX_PRINT_LIMIT
from exact_linalg import GF, QQ
from file_formats import read_form_file


class BaseCommand(ABC):
    """
    Base class for all FlatLab subcommands.
    Provides shared option handling and output helpers.
    """

    name = None
    help = ""

    def __init__(self, app_instance, logging_manager=None):
        """
        Initialize base command.

        Args:
            app_instance: Reference to the running FlatLabApp
            logging_manager: Optional logging manager for computation events
        """
        self.app = app_instance
        self.logging_manager = logging_manager

    @classmethod
    @abstractmethod
    def add_arguments(cls, parser):
        """Register the command's own arguments. Must be implemented by subclasses."""

    @abstractmethod
    def run(self, args):
        """Execute the command and return its exit code. Must be implemented by subclasses."""

    @staticmethod
    def add_shape_arguments(parser, with_degree=True):
        parser.add_argument('--n', type=int, help='Number of variables minus one (inferred when omitted)')
        if with_degree:
            parser.add_argument('--d', type=int, help='Degree of the form (inferred when omitted)')

    def emit(self, text=""):
        self.app.stdout.write(text + "\n")

    def tech_print(self, message, level="INFO"):
        if self.logging_manager:
            self.logging_manager.tech_print(message, level)

    def log(self, computation, details=None):
        if self.logging_manager:
            self.logging_manager.log_computation(computation, details)

    def field(self, args):
        return GF(args.mod) if args.mod else QQ

    def load_form(self, args, path):
        field = self.field(args)
        form = read_form_file(path, args.n, getattr(args, 'd', None), field)
        self.check_characteristic(field, form.d)
        self.tech_print(f"📄 Loaded form of degree {form.d} in {form.n + 1} variables over {field.tag}")
        return form

    def check_characteristic(self, field, d):
        if not field.is_rational and field.characteristic <= d:
            warnings.warn(f"p = {field.characteristic} <= d = {d}: the two contraction pairings differ and "
                          f"rank bounds are only claimed for characteristic 0 or p > d")

    def emit_matrix(self, matrix):
        """Print a matrix under --verbose when it fits MATRIX_PRINT_LIMIT."""
        if not self.app.verbose:
            return
        if matrix.nrows > MATRIX_PRINT_LIMIT or matrix.ncols > MATRIX_PRINT_LIMIT:
            self.tech_print(f"📐 Matrix {matrix.nrows}x{matrix.ncols} too large to print")
            return
        self.emit(matrix.format_table())
