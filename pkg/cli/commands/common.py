"""Flags shared by every subcommand and the flag-to-config bridge."""

import argparse
import logging
from typing import Dict, Optional

from components.core.exceptions import ArtifactError, ConfigError
from components.core.log import configure_logging
from components.run.parser import load_config, parse_config
from components.run.runner import EXIT_CONFIG, EXIT_IO, run
from components.run.schemas import RunConfig

logger = logging.getLogger(__name__)

# argparse destination -> configuration key
FLAG_KEYS = {
    "n": "n",
    "table": "table",
    "r": "r",
    "R": "R",
    "sides": "sides",
    "mass": "mass",
    "inertia": "inertia",
    "rough": "rough",
    "steps": "steps",
    "seed": "seed",
    "position": "position",
    "velocity": "velocity",
    "spin": "spin",
    "count": "count",
    "trials": "trials",
    "seeds": "seeds",
    "k": "k",
    "workers": "workers",
    "sampler": "sampler",
    "out": "out",
    "svg": "svg",
}


def add_common_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="key=value configuration file; flags override it")
    parser.add_argument("--n", type=int, help="dimension (2, 3 or 4)")
    parser.add_argument("--seed", type=int, help="root random seed")
    parser.add_argument("--out", help="output file for the main artifact")
    parser.add_argument("--workers", type=int, help="worker processes for ensembles")
    parser.add_argument("--log-level", dest="log_level", help="DEBUG, INFO, WARNING or ERROR")


def add_billiard_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--table", choices=["circle", "wedge", "strip", "plates3d", "box"])
    parser.add_argument("--r", dest="r", type=float,
                        help="circle radius, wedge half-angle, strip width or plate gap")
    parser.add_argument("--R", dest="R", type=float, help="ball radius")
    parser.add_argument("--sides", help="box sides, comma separated")
    parser.add_argument("--mass", type=float)
    parser.add_argument("--inertia", type=float, help="lambda in L = lambda I (uniform ball by default)")
    parser.add_argument("--rough", help="boundary condition, e.g. none, full, rank:1:0.5, random:0.5")
    parser.add_argument("--steps", type=int)
    parser.add_argument("--position", help="initial center, comma separated")
    parser.add_argument("--velocity", help="initial center velocity, comma separated")
    parser.add_argument("--spin", help="initial world angular velocity, lower-triangle coordinates")
    parser.add_argument("--svg", help="trajectory plot")


def overrides(args: argparse.Namespace) -> Dict[str, object]:
    values = vars(args)
    return {key: values[dest] for dest, key in FLAG_KEYS.items() if values.get(dest) is not None}


def build_run_config(args: argparse.Namespace, command: str) -> RunConfig:
    values = overrides(args)
    values["command"] = command
    if args.config:
        return load_config(args.config, values)
    return parse_config("", values)


def execute(args: argparse.Namespace, command: str) -> int:
    """Validate the flags into a RunConfig and run it."""
    configure_logging(args.log_level)
    try:
        config = build_run_config(args, command)
    except ConfigError as error:
        for item in error.errors:
            logger.error("config error: %s: %s", item["key"], item["message"])
        return EXIT_CONFIG
    except ArtifactError as error:
        logger.error("i/o error: %s", error)
        return EXIT_IO
    return run(config)
