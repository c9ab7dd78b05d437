"""Command-line front end: exit codes and arguments shared by the sub-commands."""

import argparse

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3


def add_system_arguments(parser: argparse.ArgumentParser, gamma_required: bool = True) -> None:
    """Adds --K, --L and --gamma."""
    parser.add_argument("--K", type=int, required=True, help="number of users and cache-nodes")
    parser.add_argument("--L", type=int, required=True, help="cache-nodes each user reaches")
    parser.add_argument(
        "--gamma", type=int, required=gamma_required, help="subfiles of each file per node"
    )
