#!/usr/bin/env python3

from bound_manager import BoundManager, Decomposition, gap_regime
from file_formats import read_decomposition_file
from .base_command import BaseCommand


class VerifyCommand(BaseCommand):
    """Check a Waring decomposition F = sum of c_i l_i^d."""

    name = "verify"
    help = "verify a decomposition of F into powers of linear forms"

    @classmethod
    def add_arguments(cls, parser):
        parser.add_argument('form_file', help='File holding the form F')
        parser.add_argument('decomposition_file', help="File with one 'coeff ; c0,...,cn' term per line")
        cls.add_shape_arguments(parser)
        parser.add_argument('--no-cross-check', action='store_true',
                            help='Skip comparing the decomposition with the certified lower bound')

    def run(self, args):
        form = self.load_form(args, args.form_file)
        raw_terms = read_decomposition_file(args.decomposition_file, form.field)
        decomposition = Decomposition.from_raw_terms(raw_terms, form.d, form.field)
        manager = BoundManager(self.logging_manager, args.jobs, self.app.pairing, seed=self.app.seed)
        ok = manager.verify_decomposition(form, decomposition, cross_check=not args.no_cross_check)
        self.emit(f"{'ok' if ok else 'fail'} r={decomposition.r}")
        return 0


class GapCommand(BaseCommand):
    """Report whether flattening minors provably cannot cut out the secant variety."""

    name = "gap"
    help = "regime in which vector-bundle minors are insufficient for sigma_r(v_d(P^n))"

    @classmethod
    def add_arguments(cls, parser):
        parser.add_argument('--n', type=int, required=True, help='Dimension of the projective space')
        parser.add_argument('--d', type=int, required=True, help='Degree of the Veronese embedding')
        parser.add_argument('--r', type=int, required=True, help='Secant order')

    def run(self, args):
        regime = gap_regime(args.n, args.d, args.r)
        self.log("GAP_REGIME", {"n": args.n, "d": args.d, "r": args.r, "regime": regime.value})
        self.emit(regime.value)
        return 0
