"""
The 'compare' sub-command: the rate and subpacketization table as CSV.
"""

import logging
import sys
from source import utils
from source.cli import EXIT_OK
from source.pda.baselines import RK2021_FOOTNOTE, compare_table, to_csv

logger = logging.getLogger(__name__)


def add_parser(subparsers, name: str) -> None:
    """Registers the sub-command."""
    parser = subparsers.add_parser(name, help="compare against earlier schemes (CSV)")
    parser.add_argument("--K", type=int, required=True)
    parser.add_argument("--L", type=int, required=True)
    parser.add_argument("--gamma-min", dest="gamma_min", type=int, default=0)
    parser.add_argument("--gamma-max", dest="gamma_max", type=int, default=None)
    parser.add_argument("--out", metavar="PATH", default=None, help="CSV file")


def run(args, settings: utils.Settings) -> int:  # pylint: disable=unused-argument
    """Writes the CSV; the footnote goes to standard error."""
    rows = compare_table(args.K, args.L, args.gamma_min, args.gamma_max)
    utils.write_output(to_csv(rows), args.out)
    print(f"note: {RK2021_FOOTNOTE}", file=sys.stderr)
    return EXIT_OK
