"""
The 'verify' sub-command: check a serialized array against C1-C3 and optionally the placement.
"""

import logging
from source import exceptions, utils
from source.cli import EXIT_FAILURE, EXIT_OK
from source.pda.params import validate
from source.pda.core import parse, verify, verify_against_placement

logger = logging.getLogger(__name__)


def _parse_params(text: str):
    try:
        K, L, gamma = (int(part) for part in text.split(","))
    except ValueError:
        raise exceptions.ParameterError(f"--params expects K,L,gamma, got {text!r}") from None
    return validate(K, L, gamma)


def add_parser(subparsers, name: str) -> None:
    """Registers the sub-command."""
    parser = subparsers.add_parser(name, help="verify a PDA file (grid or record)")
    parser.add_argument("--in", dest="in_path", metavar="PATH", required=True)
    parser.add_argument(
        "--params", metavar="K,L,GAMMA", default=None,
        help="also check the star pattern of this placement",
    )


def run(args, settings: utils.Settings) -> int:  # pylint: disable=unused-argument
    """Prints the statistics, or the violation with its witness cells and exits 1."""
    params = _parse_params(args.params) if args.params else None
    with open(args.in_path, "r", encoding="utf-8") as f:
        pda = parse(f.read())

    report = verify(pda)
    if not report.ok:
        for violation in report.violations:
            print(str(violation))
            for position, k in violation.cells:
                print(f"  witness: row {pda.rows[position]!r}, column {k}")
        logger.warning("'%s' is not a PDA: %s", args.in_path, report.violation)
        return EXIT_FAILURE

    stats = report.stats
    print(stats.summary())
    print(f"R={stats.rate}, M/N={stats.memory_ratio}, average gain={stats.average_gain}")
    if params is not None:
        if not verify_against_placement(pda, params):
            print(f"star pattern differs from the placement of {params}")
            logger.warning("'%s' does not follow the placement of %s", args.in_path, params)
            return EXIT_FAILURE
        print(f"star pattern matches the placement of {params}")
    return EXIT_OK
