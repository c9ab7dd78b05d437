"""
The 'bounds' sub-command: the gain bound next to the gain the construction reaches.
"""

import csv
import io
import logging
from source import exceptions, utils
from source.cli import EXIT_OK, add_system_arguments
from source.pda.params import validate
from source.pda.bounds import g_star, gain_gap
from source.pda.constructions import theorem_parameters

logger = logging.getLogger(__name__)

SWEEP_HEADER = ["gamma", "t", "case", "g_star", "r_star_num", "r_star_den", "g_achieved", "gap"]


def add_parser(subparsers, name: str) -> None:
    """Registers the sub-command."""
    parser = subparsers.add_parser(name, help="gain bound g* against the achieved gain")
    add_system_arguments(parser, gamma_required=False)
    parser.add_argument("--sweep", action="store_true", help="CSV over every gamma")
    parser.add_argument("--out", metavar="PATH", default=None, help="output file")


def sweep_csv(K: int, L: int) -> str:
    """Returns the sweep CSV for gamma in [0:floor(K/L)]."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(SWEEP_HEADER)
    for gamma in range(0, K // L + 1):
        params = validate(K, L, gamma)
        bound = g_star(K, params.t)
        achieved = theorem_parameters(params)
        writer.writerow([
            gamma, params.t, achieved.case.value, bound.g_star,
            bound.r_star.numerator, bound.r_star.denominator,
            achieved.g, gain_gap(params),
        ])
    return buffer.getvalue()


def run(args, settings: utils.Settings) -> int:  # pylint: disable=unused-argument
    """Prints one line for (K, L, gamma), or the sweep CSV."""
    if args.sweep:
        validate(args.K, args.L, 0)
        utils.write_output(sweep_csv(args.K, args.L), args.out)
        return EXIT_OK
    if args.gamma is None:
        raise exceptions.ParameterError("bounds needs --gamma unless --sweep is given")

    params = validate(args.K, args.L, args.gamma)
    bound = g_star(params.K, params.t)
    achieved = theorem_parameters(params)
    utils.write_output(
        f"{params}: g*={bound.g_star} ({bound.branch.value}), R*={bound.r_star}, "
        f"achieved g={achieved.g} ({achieved.case.value}), R={achieved.rate}, "
        f"gap {gain_gap(params)}",
        args.out,
    )
    return EXIT_OK
