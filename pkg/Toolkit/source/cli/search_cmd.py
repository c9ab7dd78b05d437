"""
The 'search-gain' sub-command: exhaustive single-symbol gain next to g*.
"""

import logging
from source import utils
from source.cli import EXIT_OK
from source.pda.bounds import g_star
from source.pda.oracle import max_single_symbol_gain

logger = logging.getLogger(__name__)


def add_parser(subparsers, name: str) -> None:
    """Registers the sub-command."""
    parser = subparsers.add_parser(name, help="brute-force the largest single-symbol gain")
    parser.add_argument("--K", type=int, required=True, help="number of users")
    parser.add_argument("--t", type=int, required=True, help="users per subfile, 0 <= t < K")
    parser.add_argument(
        "--max-K-override", dest="max_k_override", type=int, default=None,
        help="raise the K cap of the search",
    )


def run(args, settings: utils.Settings) -> int:
    """Prints g_max, g* and a witness."""
    result = max_single_symbol_gain(args.K, args.t, max_k=args.max_k_override, settings=settings)
    bound = g_star(args.K, args.t)
    relation = "=" if result.g_max == bound.g_star else "<"
    print(f"K={args.K}, t={args.t}: g_max={result.g_max} {relation} g*={bound.g_star}")
    print("witness: " + " ".join(f"({j},{k})" for j, k in result.witness))
    print(f"nodes explored: {utils.format_number(result.nodes_explored)}")
    return EXIT_OK
