#!/usr/bin/env python3

from apolarity import hilbert_profile, in_span
from config import DEFAULT_T_MAX
from errors import UnstableHilbertError
from file_formats import read_ideal_file
from .base_command import BaseCommand


class InSpanCommand(BaseCommand):
    """Apolarity test: does F lie in the span of the scheme cut out by the ideal?"""

    name = "inspan"
    help = "test whether F lies in the span of the scheme of an ideal"

    @classmethod
    def add_arguments(cls, parser):
        parser.add_argument('form_file', help='File holding the form F')
        parser.add_argument('ideal_file', help='File with one ideal generator in y0..yn per line')
        cls.add_shape_arguments(parser)

    def run(self, args):
        form = self.load_form(args, args.form_file)
        ideal = read_ideal_file(args.ideal_file, form.n, form.field)
        result = in_span(ideal, form, self.app.pairing)
        self.log("SPAN_TEST", {"generators": len(ideal.generators), "d": form.d, "in_span": result})
        self.emit("true" if result else "false")
        return 0


class LengthCommand(BaseCommand):
    """Length of the zero-dimensional scheme of an ideal."""

    name = "length"
    help = "length of the scheme cut out by an ideal (stabilized Hilbert function)"

    @classmethod
    def add_arguments(cls, parser):
        parser.add_argument('ideal_file', help='File with one ideal generator in y0..yn per line')
        cls.add_shape_arguments(parser, with_degree=False)
        parser.add_argument('--tmax', type=int, default=DEFAULT_T_MAX,
                            help=f'Last degree to try (default: {DEFAULT_T_MAX})')

    def run(self, args):
        ideal = read_ideal_file(args.ideal_file, args.n, self.field(args))
        profile = hilbert_profile(ideal, args.tmax)
        self.tech_print("📈 Hilbert function: " + ", ".join(f"h({t})={h}" for t, h in profile.values))
        self.log("HILBERT_PROFILE", profile.to_dict())
        if profile.length is None:
            self.emit("unstable")
            raise UnstableHilbertError(f"Hilbert function did not stabilize by t={args.tmax}; raise --tmax "
                                       f"(the ideal may not define a zero-dimensional scheme)", profile)
        self.emit(f"length {profile.length}")
        return 0
