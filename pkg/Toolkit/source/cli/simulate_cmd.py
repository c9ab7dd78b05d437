"""
The 'simulate' sub-command: byte-level placement, delivery and decoding.
"""

import logging
import yaml
from source import utils
from source.cli import EXIT_OK, add_system_arguments
from source.pda.params import validate
from source.sim.simulator import run_simulation, transcript_records

logger = logging.getLogger(__name__)


def add_parser(subparsers, name: str) -> None:
    """Registers the sub-command."""
    parser = subparsers.add_parser(name, help="run the scheme on real bytes")
    add_system_arguments(parser)
    parser.add_argument("--files", type=int, default=None, help="number of files N (default K)")
    parser.add_argument("--demand", choices=utils.DEMAND_PRESETS, default=None)
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--bytes", type=int, default=None, help="bytes per subpacket B")
    parser.add_argument("--transcript", metavar="PATH", default=None, help="YAML transcript dump")


def run(args, settings: utils.Settings) -> int:
    """Runs the simulation and prints the totals and the decode verdict."""
    params = validate(args.K, args.L, args.gamma, args.files)
    report = run_simulation(
        params,
        N=params.N,
        B=args.bytes if args.bytes is not None else settings.get_simulation("subpacket_bytes"),
        demand=args.demand or settings.get_simulation("demand"),
        seed=args.seed if args.seed is not None else settings.get_simulation("seed"),
    )

    print(f"{params}, N={report.N}, B={report.B}, demand={list(report.demand)}")
    print(
        f"messages={report.messages_sent}, bytes={report.bytes_sent}, "
        f"file size={report.file_size}, node bytes={report.node_bytes[0] if report.node_bytes else 0}"
    )
    print(report.summary())

    if args.transcript:
        with open(args.transcript, "w", encoding="utf-8") as f:
            yaml.safe_dump(transcript_records(report.transcript), f, sort_keys=False)
        logger.info("Transcript written to '%s'", args.transcript)
    return EXIT_OK
