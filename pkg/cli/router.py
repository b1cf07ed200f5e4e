"""Command-line parser setup."""

import argparse

from cli.commands import experiment, simulate, verify


def create_parser() -> argparse.ArgumentParser:
    """Create and configure the command-line parser."""
    parser = argparse.ArgumentParser(
        prog="rough-billiards",
        description="Rigid-body billiards with strict collision maps",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    # Include subcommands
    simulate.register(subparsers)
    experiment.register(subparsers)
    verify.register(subparsers)

    return parser
