"""Command-line front end: `ltn-lab <subcommand> <config.json>`."""

import argparse
import logging
import sys
from collections.abc import Sequence

from ltn_lab import __version__
from ltn_lab.errors import LtnLabSolverError, LtnLabValidationError
from ltn_lab.lab import Lab
from ltn_lab.models.run_config import DiagnosticKind, OutputFormat

_logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_SOLVER = 3

SUBCOMMANDS: dict[str, DiagnosticKind | None] = {
    "run": None,
    "patch-test": DiagnosticKind.PATCH_TEST,
    "ghost-force": DiagnosticKind.GHOST_FORCE,
    "converge": DiagnosticKind.CONVERGE,
    "sweep-robin": DiagnosticKind.SWEEP_ROBIN,
    "compare": DiagnosticKind.COMPARE,
}


def build_parser() -> argparse.ArgumentParser:
    """The argument parser with one subcommand per pipeline."""
    parser = argparse.ArgumentParser(prog="ltn-lab", description="One-dimensional local-to-nonlocal coupling lab.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True)
    for name, kind in SUBCOMMANDS.items():
        summary = "run the pipeline named in the config" if kind is None else f"run the {kind} pipeline"
        subparser = subparsers.add_parser(name, help=summary)
        subparser.add_argument("path", nargs="?", help="JSON config file")
        subparser.add_argument("--config", dest="config", help="JSON config file")
        subparser.add_argument("--out", help="output directory, overrides output.directory")
        subparser.add_argument(
            "--format", choices=[str(value) for value in OutputFormat], help="report format, overrides output.format"
        )
        subparser.add_argument("--seed", type=int, help="overrides the config seed")
        subparser.add_argument(
            "--log-level", default="WARNING", choices=["DEBUG", "INFO", "WARNING", "ERROR"], help="logging level"
        )
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    """Entry point of the `ltn-lab` script; returns the exit status.

    Exit status is 0 on success, 2 on a validation error and 3 on a solver or output failure, with a one-line
    message on standard error.
    """
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=args.log_level, stream=sys.stderr)
    path = args.config or args.path
    if path is None:
        parser.error("a config file is required, as a positional argument or with --config")
    try:
        written = Lab().runner.execute(path, SUBCOMMANDS[args.command], args.out, args.format, args.seed)
    except LtnLabValidationError as err:
        _logger.error(dict(command=args.command, error=type(err).__name__))
        print(f"ltn-lab: validation error: {err}", file=sys.stderr)
        return EXIT_VALIDATION
    except LtnLabSolverError as err:
        _logger.error(dict(command=args.command, error=type(err).__name__))
        print(f"ltn-lab: solver error: {err}", file=sys.stderr)
        return EXIT_SOLVER
    for file in written:
        print(file)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
