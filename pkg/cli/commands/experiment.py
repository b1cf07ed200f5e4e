"""`experiment`: the quantitative billiard experiments."""

import argparse

from cli.commands.common import add_billiard_arguments, add_common_arguments, execute

EXPERIMENTS = ("return-angle", "caustics", "bounded", "strip", "recurrence")


def register(subparsers) -> None:
    parser = subparsers.add_parser("experiment", help="run an experiment and print its report")
    parser.add_argument("name", choices=EXPERIMENTS)
    add_common_arguments(parser)
    add_billiard_arguments(parser)
    parser.add_argument("--count", type=int, help="launched samples (return-angle)")
    parser.add_argument("--seeds", type=int, help="ensemble size (strip)")
    parser.add_argument("--sampler", choices=["cosine", "uniform"], help="launch-angle sampler")
    parser.set_defaults(handler=handle)


def handle(args: argparse.Namespace) -> int:
    return execute(args, args.name)
