"""
The 'construct' sub-command: build, check and print the array for (K, L, gamma).
"""

import logging
import sys
from source import utils
from source.cli import EXIT_OK, add_system_arguments
from source.pda.params import validate
from source.pda.core import to_grid_text, to_record
from source.pda.constructions import build_scheme

logger = logging.getLogger(__name__)


def add_parser(subparsers, name: str) -> None:
    """Registers the sub-command."""
    parser = subparsers.add_parser(name, help="build the PDA for (K, L, gamma)")
    add_system_arguments(parser)
    parser.add_argument("--N", type=int, default=None, help="number of files (default K)")
    parser.add_argument("--format", choices=utils.OUTPUT_FORMATS, default=None)
    parser.add_argument("--out", metavar="PATH", default=None, help="output file")


def run(args, settings: utils.Settings) -> int:
    """
    Builds the scheme and writes the array.

    The summary line goes in front of a grid as a '#' comment; with a record
    on standard output it goes to standard error instead. With --out the array
    goes to the file and the summary to standard output.
    """
    params = validate(args.K, args.L, args.gamma, args.N)
    scheme = build_scheme(params)
    summary = f"{scheme.summary()}, case={scheme.case.value}, built by {scheme.pda.provenance}"
    output_format = args.format or settings.get_output("format")

    if output_format == "json-record":
        body = to_record(scheme.pda)
        if args.out:
            print(summary)
        else:
            print(summary, file=sys.stderr)
    else:
        body = to_grid_text(scheme.pda)
        if args.out:
            print(summary)
        else:
            body = f"# {summary}\n{body}"
    utils.write_output(body, args.out)
    logger.info("Constructed %s", summary)
    return EXIT_OK
