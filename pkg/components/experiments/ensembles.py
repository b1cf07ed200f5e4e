"""Seed ensembles and multi-condition experiments."""

import logging
import multiprocessing as mp
from typing import Any, Callable, List, Optional, Sequence

import numpy as np

from components.core.config import get_settings
from components.core.exceptions import SimulationError
from components.core.rng import rng_from_seed_sequence, spawn_seeds
from components.billiard.boundary import BoundaryCondition, parse_condition
from components.billiard.dynamics import launch, simulate
from components.billiard.tables import PlatesTable, StripTable
from components.experiments.analysis import boundedness_report, diffusion_exponent
from components.experiments.schemas import ExperimentReport
from components.mechanics.inertia import ball_body
from components.mechanics.models import RigidBody

logger = logging.getLogger(__name__)


def run_chunks(
    worker: Callable[[Any], Any], tasks: Sequence[Any], workers: Optional[int] = None
) -> List[Any]:
    """
    Map a module-level `worker` over `tasks`, in order.

    With more than one worker the tasks go to a process pool; results come
    back in task order either way.
    """
    workers = workers if workers is not None else get_settings().WORKERS
    if workers <= 1 or len(tasks) <= 1:
        return [worker(task) for task in tasks]
    processes = min(workers, len(tasks))
    logger.info("running %d tasks on %d processes", len(tasks), processes)
    with mp.Pool(processes=processes) as pool:
        return pool.map(worker, tasks)


def _strip_worker(args) -> Optional[np.ndarray]:
    table, bc, ball, steps, sequence = args
    rng = rng_from_seed_sequence(sequence)
    R = ball.descriptor.radius
    angle = rng.uniform(0.1, np.pi - 0.1)
    velocity = np.zeros(table.n)
    velocity[0], velocity[-1] = np.cos(angle), np.sin(angle)
    position = np.zeros(table.n)
    position[-1] = R
    state = launch(table, ball, position, velocity, contact=np.zeros(table.n), face=0)
    trajectory = simulate(state, table, bc, ball, steps, rng=rng)
    if not trajectory.completed:
        return None
    return trajectory.centers[:, 0]


def strip_diffusion_experiment(
    seeds: int = 100,
    steps: int = 10000,
    seed: Optional[int] = None,
    workers: Optional[int] = None,
    bc: Optional[BoundaryCondition] = None,
    width: float = 1.0,
    radius: float = 0.25,
    band: Sequence[float] = (0.8, 1.2),
) -> ExperimentReport:
    """
    Mean-square longitudinal displacement of a disc in a strip under a random
    boundary condition, one trajectory per child seed.

    Every trajectory starts on the lower wall with a random upward direction
    and no spin. The growth exponent of the MSD must lie in `band`.

    Without `bc` each impact is completely rough with probability 1/2 and
    specular otherwise (`random:0.5`). A hemisphere condition can be passed
    as `bc` instead.
    """
    table = StripTable(n=2, width=width)
    ball = ball_body(radius, 2)
    bc = bc if bc is not None else parse_condition("random:0.5", 2)
    tasks = [(table, bc, ball, steps, sequence) for sequence in spawn_seeds(seed, seeds)]
    results = run_chunks(_strip_worker, tasks, workers)
    paths = [path for path in results if path is not None]
    dropped = len(results) - len(paths)
    if not paths:
        raise SimulationError(f"all {len(results)} strip trajectories were dropped")
    if dropped:
        logger.warning("dropped %d of %d strip trajectories", dropped, len(results))
    exponent = diffusion_exponent(np.array(paths))
    passed = band[0] <= exponent <= band[1]
    logger.info("strip diffusion exponent %.4f over %d seeds", exponent, len(paths))
    return ExperimentReport(
        name="strip",
        count=len(paths),
        statistics={"msd_exponent": exponent, "dropped": float(dropped)},
        tolerance=band[1] - 1.0,
        passed=passed,
        details={"band": f"{band[0]}..{band[1]}"},
    )


def plates_launch_velocity() -> np.ndarray:
    return np.array([0.6, 0.3, 1.0])


def boundedness_experiment(
    steps: int = 10000,
    seed: Optional[int] = None,
    gap: float = 1.0,
    radius: float = 0.25,
    conditions: Sequence[str] = ("full", "faces:full/rank:1:0"),
    ball: Optional[RigidBody] = None,
) -> ExperimentReport:
    """
    Horizontal excursion of a ball between two plates under several boundary
    conditions, starting from the same state.

    The report holds one bounded flag per condition; `passed` is true when the
    first condition stays bounded and every other one does not.
    """
    table = PlatesTable(gap=gap)
    ball = ball if ball is not None else ball_body(radius, 3)
    R = ball.descriptor.radius
    state = launch(
        table, ball, [0.0, 0.0, R], plates_launch_velocity(),
        spin=[0.2, -0.1, 0.3], contact=np.zeros(3), face=0,
    )
    statistics = {}
    details = {}
    flags = []
    for index, (text, sequence) in enumerate(zip(conditions, spawn_seeds(seed, len(conditions)))):
        bc = parse_condition(text, 3)
        trajectory = simulate(state, table, bc, ball, steps, rng=rng_from_seed_sequence(sequence))
        report = boundedness_report(trajectory)
        flags.append(bool(report.passed))
        statistics[f"max_excursion_{index}"] = report.statistics["max_excursion"]
        details[f"condition_{index}"] = text
        details[f"bounded_{index}"] = str(report.passed).lower()
    passed = flags[0] and not any(flags[1:])
    return ExperimentReport(
        name="bounded",
        count=steps,
        statistics=statistics,
        tolerance=get_settings().BOUNDED_GROWTH_FACTOR,
        passed=passed,
        details=details,
    )
