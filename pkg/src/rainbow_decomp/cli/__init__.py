"""Command-line front door: ``rainbow <command> [options]``.

Artifacts go to stdout or ``--out``; logs and diagnostics go to stderr.
Exit codes: 0 success, 1 verification failure or refutation, 2 exhausted
budget, 3 invalid input.
"""

import argparse
from typing import List, Optional

from rainbow_decomp import __version__
from rainbow_decomp.cli import components, instances, runs
from rainbow_decomp.cli.common import RunConfig, begin_run, configure_logging, exit_code_for
from rainbow_decomp.utils.logging import clear_context

EXIT_USAGE = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rainbow",
        description="Desk-scale toolkit for rainbow spanning tree decompositions of 1-factorized K_n.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True)
    instances.add_parsers(subparsers)
    components.add_parsers(subparsers)
    runs.add_parsers(subparsers)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Run one command and return its exit code."""
    configure_logging()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse exits 2 on usage errors; invalid input maps to 3 here
        return EXIT_USAGE if e.code else 0

    try:
        config = RunConfig.from_namespace(args)
        begin_run(config)
        return args.handler(config, args)
    except Exception as exc:
        return exit_code_for(exc)
    finally:
        clear_context()


__all__ = ["build_parser", "main"]
