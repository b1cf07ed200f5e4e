"""`simulate`: one trajectory written as CSV (and optionally SVG)."""

import argparse

from cli.commands.common import add_billiard_arguments, add_common_arguments, execute


def register(subparsers) -> None:
    parser = subparsers.add_parser("simulate", help="simulate one billiard trajectory")
    add_common_arguments(parser)
    add_billiard_arguments(parser)
    parser.set_defaults(handler=handle)


def handle(args: argparse.Namespace) -> int:
    return execute(args, "simulate")
