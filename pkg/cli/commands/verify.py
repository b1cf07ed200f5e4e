"""`verify`: randomized checks of the collision-map theory."""

import argparse

from cli.commands.common import add_common_arguments, execute

CHECKS = ("strict", "orthogonality", "dims")


def register(subparsers) -> None:
    parser = subparsers.add_parser("verify", help="check collision maps on random configurations")
    parser.add_argument("check", choices=CHECKS)
    add_common_arguments(parser)
    parser.add_argument("--trials", type=int, help="random configurations to test")
    parser.add_argument("--k", type=int, help="roughness rank (random per trial when omitted)")
    parser.set_defaults(handler=handle)


def handle(args: argparse.Namespace) -> int:
    return execute(args, args.check)
