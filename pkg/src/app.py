#!/usr/bin/env python3

import argparse
import os
import sys

# Import configuration and managers
from config import (APP_TITLE, APPLICATION_VERSION, DEFAULT_PAIRING, DEFAULT_SEED, EXIT_USAGE, LOG_DIR,
                    PAIRINGS, RUN_LOGGING_ENABLED, SEED_ENV_VAR)
from errors import FlatlabError, UsageError
from logging_manager import LoggingManager

# Import subcommands
from commands import COMMANDS


def build_parser():
    """Top-level parser; the shared flags are accepted after every subcommand."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--mod', type=int, metavar='P', help='Compute over F_p instead of Q')
    common.add_argument('--seed', type=int, help=f'Random seed (default: ${SEED_ENV_VAR} or {DEFAULT_SEED})')
    common.add_argument('--verbose', action='store_true', help='Progress on stderr, small matrices on stdout')
    common.add_argument('--jobs', type=int, default=1, help='Evaluate flattenings on this many threads')
    common.add_argument('--log-dir', help='Write JSONL run logs below this directory')
    common.add_argument('--pairing', choices=PAIRINGS, default=DEFAULT_PAIRING,
                        help=f'Contraction convention (default: {DEFAULT_PAIRING})')

    parser = argparse.ArgumentParser(
        prog='flatlab',
        description=f'{APP_TITLE}: flattening ranks, cactus rank lower bounds and apolarity tools',
    )
    parser.add_argument('--version', action='version', version=f'{APP_TITLE} {APPLICATION_VERSION}')
    subparsers = parser.add_subparsers(dest='command', metavar='command')
    subparsers.required = True
    for name, command in COMMANDS.items():
        sub = subparsers.add_parser(name, help=command.help, parents=[common])
        command.add_arguments(sub)
    return parser


def resolve_seed(seed):
    if seed is not None:
        return seed
    value = os.environ.get(SEED_ENV_VAR)
    if value is None:
        return DEFAULT_SEED
    try:
        return int(value)
    except ValueError:
        raise UsageError(f"{SEED_ENV_VAR}={value!r} is not an integer") from None


class FlatLabApp:
    """One CLI invocation: parses flags, runs a command, maps errors to exit codes."""

    def __init__(self, stdout=None, stderr=None):
        self.stdout = stdout or sys.stdout
        self.stderr = stderr or sys.stderr
        self.verbose = False
        self.pairing = DEFAULT_PAIRING
        self.seed = DEFAULT_SEED
        self.logging_manager = None

    def run(self, argv=None):
        parser = build_parser()
        try:
            args = parser.parse_args(argv)
        except SystemExit as exit_request:
            return exit_request.code if isinstance(exit_request.code, int) else EXIT_USAGE

        self.verbose = args.verbose
        self.pairing = args.pairing
        self.logging_manager = LoggingManager(verbose=args.verbose, stream=self.stderr)

        if args.log_dir or RUN_LOGGING_ENABLED:
            self.logging_manager.setup_logging_for_run(args.command, args.log_dir or LOG_DIR, {
                key: value for key, value in vars(args).items() if key != 'command'
            })

        command = COMMANDS[args.command](self, self.logging_manager)
        try:
            with self.logging_manager.capture_warnings():
                self.seed = resolve_seed(args.seed)
                self.logging_manager.tech_print(f"🚀 {APP_TITLE} {args.command} (seed {self.seed}, "
                                                f"pairing {self.pairing})")
                exit_code = command.run(args)
        except FlatlabError as e:
            self.stderr.write(f"❌ Error: {e}\n")
            self.logging_manager.log_error_event(e)
            exit_code = e.exit_code

        self.logging_manager.finalize_run(exit_code)
        return exit_code


def main(argv=None):
    return FlatLabApp().run(argv)


if __name__ == "__main__":
    sys.exit(main())
