"""
Command-line parser, dispatch and exit codes.

Each sub-command lives in its own module exposing add_parser(subparsers) and
run(args, settings) -> int.

Functions:
- build_parser() -> argparse.ArgumentParser
- dispatch(args) -> int
- main(argv) -> int
"""

import argparse
import logging
import sys
from typing import List
from source import exceptions, path, utils
from source.cli import EXIT_FAILURE, EXIT_RESOURCE, EXIT_USAGE
from source.cli import (
    bounds_cmd, compare_cmd, construct_cmd, search_cmd, simulate_cmd, verify_cmd,
)

logger = logging.getLogger(__name__)

COMMANDS = {
    "construct": construct_cmd,
    "verify": verify_cmd,
    "bounds": bounds_cmd,
    "simulate": simulate_cmd,
    "search-gain": search_cmd,
    "compare": compare_cmd,
}


def build_parser() -> argparse.ArgumentParser:
    """Builds the parser with every sub-command."""
    parser = argparse.ArgumentParser(
        prog=path.PROGRAM_NAME.lower(),
        description=f"{path.PROGRAM_NAME_LONG} {path.VERSION}: placement delivery arrays "
                    "for multi-access coded caching with cyclic wrap-around",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {path.VERSION}")
    parser.add_argument("--verbose", action="store_true", help="log to standard error")
    parser.add_argument("--settings", metavar="PATH", help="settings file to use")
    subparsers = parser.add_subparsers(dest="command", required=True)
    for name, module in COMMANDS.items():
        module.add_parser(subparsers, name)
    return parser


def dispatch(args: argparse.Namespace) -> int:
    """
    Runs the chosen sub-command and maps errors to exit codes.

    Parameters:
    - args (argparse.Namespace): Parsed arguments.

    Returns:
    - int: 0 success, 1 verification or decode failure, 2 parameter or parse
      error, 3 resource guard.
    """
    logger.info("Running '%s'", args.command)
    try:
        settings = utils.Settings(args.settings)
        return COMMANDS[args.command].run(args, settings)
    except (exceptions.ParameterError, exceptions.PdaParseError,
            exceptions.WrongCaseError, exceptions.ShapeError) as e:
        logger.warning("%s: %s", type(e).__name__, e)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except exceptions.ResourceGuardError as e:
        logger.warning("Resource guard: %s", e)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_RESOURCE
    except exceptions.DecodeError as e:
        logger.error("Decode failure: %s", e)
        print(f"decode failure: {e}", file=sys.stderr)
        return EXIT_FAILURE
    except OSError as e:
        logger.error("I/O error: %s", e)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


def main(argv: List[str] = None) -> int:
    """Parses argv and dispatches; argparse exits with 2 on usage errors."""
    return dispatch(build_parser().parse_args(argv))
