#!/usr/bin/env python3

from bound_manager import BoundManager, serialize_certificate, verify_certificate
from config import DEFAULT_COEFF_BOUND
from errors import UsageError
from exact_linalg import rank
from file_formats import parse_spec_list, read_certificate_file
from flattenings import FlatteningSpec, catalecticant_matrix, default_spec_grid
from poly_core import format_form, random_form
from .base_command import BaseCommand


class CatCommand(BaseCommand):
    """Catalecticant matrix of a form: shape and rank."""

    name = "cat"
    help = "shape and rank of the catalecticant Cat_a(F)"

    @classmethod
    def add_arguments(cls, parser):
        parser.add_argument('form_file', help='File holding the form F')
        cls.add_shape_arguments(parser)
        parser.add_argument('--a', type=int, required=True, help='Dual degree, 1 <= a <= d-1')

    def run(self, args):
        form = self.load_form(args, args.form_file)
        FlatteningSpec.catalecticant(form.n, form.d, args.a)
        matrix = catalecticant_matrix(form, args.a, self.app.pairing)
        k = rank(matrix)
        self.log("CATALECTICANT_RANK", {"a": args.a, "rows": matrix.nrows, "cols": matrix.ncols, "rank": k})
        self.emit(f"shape {matrix.nrows}x{matrix.ncols}")
        self.emit_matrix(matrix)
        self.emit(f"rank {k}")
        return 0


class BoundCommand(BaseCommand):
    """Certified lower bound for cactus and Waring rank."""

    name = "bound"
    help = "certified cactus/Waring rank lower bound from flattening ranks"

    @classmethod
    def add_arguments(cls, parser):
        parser.add_argument('form_file', help='File holding the form F')
        cls.add_shape_arguments(parser)
        parser.add_argument('--grid', choices=['default', 'list'], default='default',
                            help='Use the default flattening grid or the --specs list')
        parser.add_argument('--specs', help='Comma-separated flattenings, e.g. cat:1,koszul:1:0')
        parser.add_argument('--json', dest='json_path', help='Write the certificate as JSON to this path')
        parser.add_argument('--no-witness', action='store_true', help='Do not attach witness minors')
        parser.add_argument('--modular', action='store_true',
                            help='Compute ranks over Q through the certified modular path')

    def run(self, args):
        form = self.load_form(args, args.form_file)
        if args.grid == 'list':
            if not args.specs:
                raise UsageError("--grid list needs --specs")
            specs = parse_spec_list(args.specs, form.n, form.d)
        else:
            if args.specs:
                raise UsageError("--specs only applies with --grid list")
            if form.n < 1:
                raise UsageError("the default grid needs at least two variables but the form only uses x0; "
                                 "pass --n if the form lives in more variables")
            specs = default_spec_grid(form.n, form.d)

        manager = BoundManager(self.logging_manager, args.jobs, self.app.pairing, args.modular, self.app.seed)
        certificate = manager.cactus_lower_bound(form, specs, witnesses=False if args.no_witness else None)

        rows = [(entry.spec.label, f"{entry.rows}x{entry.cols}", str(entry.rank), str(entry.e), str(entry.bound))
                for entry in certificate.entries]
        header = ("spec", "shape", "rank", "e", "bound")
        widths = [max(len(row[i]) for row in rows + [header]) for i in range(len(header))]
        self.emit("  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip())
        for row in rows:
            self.emit("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip())
        self.emit(f"best bound {certificate.best_bound}")

        if args.json_path:
            try:
                with open(args.json_path, 'w', encoding='utf-8') as f:
                    f.write(serialize_certificate(certificate))
            except OSError as e:
                raise UsageError(f"cannot write {args.json_path}: {e}") from None
            self.tech_print(f"💾 Certificate written to {args.json_path}")
        return 0


class RandomCommand(BaseCommand):
    """Print a seeded random form."""

    name = "random"
    help = "print a random form with integer coefficients"

    @classmethod
    def add_arguments(cls, parser):
        parser.add_argument('--n', type=int, required=True, help='Number of variables minus one')
        parser.add_argument('--d', type=int, required=True, help='Degree')
        parser.add_argument('--bound', type=int, default=DEFAULT_COEFF_BOUND,
                            help=f'Coefficients drawn from [-bound, bound] (default: {DEFAULT_COEFF_BOUND})')

    def run(self, args):
        form = random_form(args.n, args.d, self.field(args), self.app.seed, args.bound)
        self.emit(format_form(form))
        return 0


class CheckCommand(BaseCommand):
    """Recompute a certificate written by ``bound --json`` against its form."""

    name = "check"
    help = "recompute every entry of a saved bound certificate"

    @classmethod
    def add_arguments(cls, parser):
        parser.add_argument('form_file', help='File holding the form F')
        parser.add_argument('certificate_file', help='JSON certificate written by bound --json')
        cls.add_shape_arguments(parser)

    def run(self, args):
        certificate = read_certificate_file(args.certificate_file)
        if args.n is None:
            args.n = certificate.n
        form = self.load_form(args, args.form_file)
        valid = verify_certificate(form, certificate)
        self.log("CERTIFICATE_CHECK", {"entries": len(certificate.entries), "best_bound": certificate.best_bound,
                                       "valid": valid})
        self.emit(f"valid best bound {certificate.best_bound}" if valid else "invalid")
        return 0
