"""Execute a validated RunConfig: simulations, experiments and verification batches."""

import logging
import math
from pathlib import Path
from typing import Callable, Dict, List, Optional

import numpy as np

from components.core.config import get_settings
from components.core.exceptions import (
    ArtifactError,
    ConfigError,
    SimulationError,
    TooFewSegmentsError,
)
from components.core.rng import make_rng
from components.billiard.dynamics import launch, simulate
from components.billiard.models import BilliardState
from components.billiard.repository import TrajectoryRepository
from components.billiard.tables import AnyTable, BoxTable, CircleTable, StripTable, WedgeTable
from components.contact.collision import (
    dimension_rows,
    grassmannian_table,
    verify_orthogonality_batch,
    verify_strict_batch,
)
from components.contact.schemas import VerificationSummary
from components.experiments.analysis import caustic_analysis, recurrence_report
from components.experiments.ensembles import boundedness_experiment, strip_diffusion_experiment
from components.experiments.measure import return_angle_experiment
from components.experiments.repository import ReportRepository, report_lines
from components.experiments.sampling import angle_density
from components.experiments.schemas import ExperimentReport
from components.lie.operations import se_dim
from components.mechanics.models import RigidBody
from components.run.schemas import RunConfig

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_SIMULATION = 2
EXIT_IO = 3


def _output(config: RunConfig, default: str) -> Path:
    return Path(config.out) if config.out is not None else get_settings().OUTPUT_DIR / default


def _require_table(config: RunConfig, kinds: tuple) -> None:
    if config.table not in kinds:
        raise ConfigError([{
            "key": "table",
            "message": f"{config.command} needs a {' or '.join(kinds)} table, got {config.table}",
        }])


def default_velocity(table: AnyTable) -> np.ndarray:
    n = table.n
    if isinstance(table, CircleTable):
        velocity = np.zeros(n)
        velocity[0], velocity[1] = 0.3, 1.0
    elif isinstance(table, WedgeTable):
        velocity = np.array([-1.0, 0.3])
    elif isinstance(table, StripTable):
        velocity = np.zeros(n)
        velocity[0], velocity[-1] = 1.0, 1.0
        if n >= 3:
            velocity[1] = 0.5
    else:
        velocity = np.array([1.0, 0.7, 0.3, 0.2][:n])
    return velocity


def default_position(table: AnyTable, R: float) -> np.ndarray:
    n = table.n
    position = np.zeros(n)
    if isinstance(table, CircleTable):
        position[0] = 0.5 * (table.radius - R)
    elif isinstance(table, WedgeTable):
        position[0] = 2.0 * R / math.sin(table.half_angle) + 1.0
    elif isinstance(table, StripTable):
        position[-1] = 0.5 * table.gap
    elif isinstance(table, BoxTable):
        position = 0.5 * np.asarray(table.sides)
    return position


def initial_state(config: RunConfig, table: AnyTable, ball: RigidBody) -> BilliardState:
    """Launch state from the configured position, velocity and spin, or the table defaults."""
    position = config.position if config.position is not None else default_position(
        table, config.ball_radius
    )
    velocity = config.velocity if config.velocity is not None else default_velocity(table)
    return launch(table, ball, position, velocity, spin=config.spin)


def summary_lines(summary: VerificationSummary) -> List[str]:
    lines = [f"check={summary.name}", f"trials={summary.trials}", f"failures={summary.failures}"]
    float_format = get_settings().FLOAT_FORMAT
    lines += [f"max_{key}={float_format % value}" for key, value in summary.max_residuals.items()]
    return lines + [f"passed={str(summary.passed).lower()}"]


def _emit(lines: List[str], path: Optional[Path] = None) -> None:
    text = "\n".join(lines) + "\n"
    print(text, end="")
    if path is not None:
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(text)
        except OSError as error:
            raise ArtifactError(f"cannot write report ({error.strerror})", str(path)) from error


def _finish_report(config: RunConfig, report: ExperimentReport, default: str) -> int:
    repository = ReportRepository()
    repository.save_report(report, str(_output(config, default)))
    _emit(report_lines(report))
    return EXIT_OK


def _trajectory(config: RunConfig):
    table = config.build_table()
    ball = config.build_ball()
    state = initial_state(config, table, ball)
    trajectory = simulate(state, table, config.build_condition(), ball, config.steps,
                          rng=make_rng(config.seed))
    return table, ball, trajectory


def _stopped(trajectory) -> int:
    logger.error(
        "trajectory stopped at step %s: reason=%s %s",
        trajectory.failed_step, trajectory.reason, trajectory.message,
    )
    return EXIT_SIMULATION


def run_simulate(config: RunConfig) -> int:
    table, ball, trajectory = _trajectory(config)
    repository = TrajectoryRepository()
    repository.save_csv(trajectory, ball, str(_output(config, "trajectory.csv")))
    if config.svg is not None:
        repository.save_svg(trajectory, table, ball, str(config.svg))
    if not trajectory.completed:
        return _stopped(trajectory)
    return EXIT_OK


def run_return_angle(config: RunConfig) -> int:
    _require_table(config, ("box",))
    report = return_angle_experiment(
        config.build_table(),
        config.build_condition(),
        config.build_ball(),
        config.count,
        seed=config.seed,
        sampler=config.sampler,
        workers=config.workers,
    )
    output = _output(config, "return-angle.txt")
    repository = ReportRepository()
    repository.save_histogram_csv(report, str(output.with_suffix(".csv")))
    d = se_dim(config.n)
    repository.save_histogram_svg(
        report, str(output.with_suffix(".svg")), density=lambda phi: angle_density(phi, d)
    )
    return _finish_report(config, report, "return-angle.txt")


def run_caustics(config: RunConfig) -> int:
    _require_table(config, ("circle",))
    table, ball, trajectory = _trajectory(config)
    if config.svg is not None:
        TrajectoryRepository().save_svg(trajectory, table, ball, str(config.svg))
    if not trajectory.completed:
        return _stopped(trajectory)
    return _finish_report(config, caustic_analysis(trajectory), "caustics.txt")


def run_recurrence(config: RunConfig) -> int:
    table, ball, trajectory = _trajectory(config)
    if config.svg is not None:
        TrajectoryRepository().save_svg(trajectory, table, ball, str(config.svg))
    if not trajectory.completed:
        return _stopped(trajectory)
    return _finish_report(config, recurrence_report(trajectory), "recurrence.txt")


def run_bounded(config: RunConfig) -> int:
    gap = config.table_size if config.table == "plates3d" else 1.0
    report = boundedness_experiment(config.steps, config.seed, gap=gap, radius=config.ball_radius)
    return _finish_report(config, report, "bounded.txt")


def run_strip(config: RunConfig) -> int:
    if config.n != 2:
        raise ConfigError([{"key": "n", "message": "the strip experiment is planar (n = 2)"}])
    width = config.table_size if config.table == "strip" else 1.0
    report = strip_diffusion_experiment(
        seeds=config.seeds,
        steps=config.steps,
        seed=config.seed,
        workers=config.workers,
        bc=config.build_condition(),
        width=width,
        radius=config.ball_radius,
    )
    return _finish_report(config, report, "strip.txt")


def run_strict(config: RunConfig) -> int:
    summary = verify_strict_batch(config.n, config.trials, make_rng(config.seed), config.k)
    _emit(summary_lines(summary), config.out)
    return EXIT_OK


def run_orthogonality(config: RunConfig) -> int:
    summary = verify_orthogonality_batch(config.n, config.trials, make_rng(config.seed))
    _emit(summary_lines(summary), config.out)
    return EXIT_OK


def run_dims(config: RunConfig) -> int:
    lines = []
    for n, row in enumerate(grassmannian_table(5), start=1):
        lines.append(f"grassmannian_n{n}=" + ",".join(str(value) for value in row))
    for row in dimension_rows((2, 3, 4), make_rng(config.seed)):
        lines.append(
            f"subspaces_n{row.n}=nonslip:{row.nonslip},rolling:{row.rolling},"
            f"diagonal:{row.diagonal},impulse:{row.impulse}"
        )
    _emit(lines, config.out)
    return EXIT_OK


HANDLERS: Dict[str, Callable[[RunConfig], int]] = {
    "simulate": run_simulate,
    "return-angle": run_return_angle,
    "caustics": run_caustics,
    "bounded": run_bounded,
    "strip": run_strip,
    "recurrence": run_recurrence,
    "strict": run_strict,
    "orthogonality": run_orthogonality,
    "dims": run_dims,
}


def run(config: RunConfig) -> int:
    """
    Run the configured command and return the process exit status.

    0 on success, 1 for configuration errors, 2 when a simulation ends in a
    declared error (corner hit, escape, grazing impact, energy drift) and 3
    when an artifact cannot be written.
    """
    try:
        return HANDLERS[config.command](config)
    except ConfigError as error:
        for item in error.errors:
            logger.error("config error: %s: %s", item["key"], item["message"])
        return EXIT_CONFIG
    except (SimulationError, TooFewSegmentsError) as error:
        logger.error("simulation error: reason=%s %s", type(error).__name__, error)
        return EXIT_SIMULATION
    except ArtifactError as error:
        logger.error("i/o error: %s", error)
        return EXIT_IO
    except ValueError as error:
        logger.error("config error: %s", error)
        return EXIT_CONFIG
