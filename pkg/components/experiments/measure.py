"""Invariance of the billiard measure, tested through first-return angles."""

import logging
import math
from typing import List, Optional, Sequence

import numpy as np
from scipy import stats

from components.core.config import get_settings
from components.core.exceptions import SimulationError
from components.core.rng import make_rng, rng_from_seed_sequence, spawn_seeds
from components.core.schemas import Histogram
from components.billiard.boundary import BoundaryCondition
from components.billiard.dynamics import ball_parameters, step
from components.billiard.tables import BoxTable
from components.experiments.ensembles import run_chunks
from components.experiments.sampling import (
    angle_cdf,
    sample_billiard_measure,
    sample_to_state,
    state_angle,
)
from components.experiments.schemas import ExperimentReport, MeasureSample
from components.lie.operations import se_dim
from components.mechanics.models import RigidBody

logger = logging.getLogger(__name__)


def first_return_angle(
    sample: MeasureSample,
    table: BoxTable,
    bc: BoundaryCondition,
    ball: RigidBody,
    energy: float,
    step_cap: int,
    rng: np.random.Generator,
) -> Optional[float]:
    """
    Angle to the face normal at the first return to the sample's face.

    Returns None when the ball has not come back within `step_cap` collisions
    or a step fails (corner or grazing impact).
    """
    _, lam = ball_parameters(ball)
    state = sample_to_state(sample, table, ball, energy)
    for _ in range(step_cap):
        try:
            state = step(state, table, bc, ball, rng)
        except SimulationError as error:
            logger.debug("return run stopped: %s", error.reason)
            return None
        if state.face == sample.face:
            return state_angle(state, table, lam)
    return None


def _return_worker(args) -> List[Optional[float]]:
    table, bc, ball, energy, step_cap, samples, sequences = args
    return [
        first_return_angle(sample, table, bc, ball, energy, step_cap, rng_from_seed_sequence(sequence))
        for sample, sequence in zip(samples, sequences)
    ]


def ks_statistic(angles: Sequence[float], d: int):
    """Kolmogorov-Smirnov test of angles against the cos(phi) law on a d-dimensional hemisphere."""
    return stats.kstest(np.asarray(angles, dtype=float), lambda phi: angle_cdf(phi, d))


def angle_histogram(angles: Sequence[float], bins: Optional[int] = None) -> Histogram:
    bins = bins or get_settings().HISTOGRAM_BINS
    clipped = np.clip(np.asarray(angles, dtype=float), 0.0, math.pi / 2)
    counts, edges = np.histogram(clipped, bins=bins, range=(0.0, math.pi / 2))
    return Histogram(edges=edges.tolist(), counts=counts.tolist())


def return_angle_experiment(
    table: BoxTable,
    bc: BoundaryCondition,
    ball: RigidBody,
    count: int,
    seed: Optional[int] = None,
    sampler: str = "cosine",
    face: Optional[int] = None,
    energy: float = 0.5,
    workers: Optional[int] = None,
    step_cap: Optional[int] = None,
    threshold: Optional[float] = None,
    chunk_size: int = 1000,
) -> ExperimentReport:
    """
    Launch `count` samples of the billiard measure from one face of a box and
    compare the angles of their first return to that face with the cos(phi) law.

    Args:
        table: box table
        bc: boundary condition on every face
        ball: the ball
        count: number of launched samples
        seed: root seed; sample k always uses child stream k
        sampler: "cosine" or the "uniform" control
        face: launch face, the lower wall of the last axis by default
        energy: kinetic energy of the samples
        workers: process count for the return runs
        step_cap: collisions allowed before a sample is dropped
        threshold: KS acceptance threshold
        chunk_size: samples per pool task

    Returns:
        ExperimentReport with the KS distance and the return-angle histogram
    """
    settings = get_settings()
    face = 2 * (table.n - 1) if face is None else face
    step_cap = step_cap or settings.RETURN_STEP_CAP
    threshold = threshold if threshold is not None else settings.KS_THRESHOLD
    d = se_dim(table.n)

    sampling_sequence, *sequences = spawn_seeds(seed, count + 1)
    samples = sample_billiard_measure(
        table, face, ball, energy, count, rng_from_seed_sequence(sampling_sequence), sampler
    )
    tasks = [
        (table, bc, ball, energy, step_cap, samples[start:start + chunk_size],
         sequences[start:start + chunk_size])
        for start in range(0, count, chunk_size)
    ]
    results = [angle for chunk in run_chunks(_return_worker, tasks, workers) for angle in chunk]
    angles = [angle for angle in results if angle is not None]
    dropped = count - len(angles)
    dropped_fraction = dropped / count
    if dropped:
        logger.warning("dropped %d of %d return samples", dropped, count)
    if not angles:
        raise SimulationError("no sample returned to its launch face")

    result = ks_statistic(angles, d)
    passed = result.statistic < threshold and dropped_fraction <= settings.MAX_DROPPED_FRACTION
    logger.info("return angles: KS %.5f (p=%.3g), %d dropped", result.statistic, result.pvalue, dropped)
    return ExperimentReport(
        name="return-angle",
        count=len(angles),
        statistics={
            "ks_distance": float(result.statistic),
            "ks_pvalue": float(result.pvalue),
            "dropped": float(dropped),
            "dropped_fraction": dropped_fraction,
            "mean_cos": float(np.mean(np.cos(angles))),
        },
        histogram=angle_histogram(angles),
        tolerance=threshold,
        passed=passed,
        details={"sampler": sampler, "face": str(face), "dimension": str(d)},
    )


def sampler_check(table: BoxTable, ball: RigidBody, count: int, seed: Optional[int] = None,
                  sampler: str = "cosine", face: int = 0) -> ExperimentReport:
    """KS test of the launch angles themselves, without any dynamics."""
    samples = sample_billiard_measure(table, face, ball, 0.5, count, make_rng(seed), sampler)
    angles = [sample.angle for sample in samples]
    result = ks_statistic(angles, se_dim(table.n))
    return ExperimentReport(
        name="sampler",
        count=count,
        statistics={
            "ks_distance": float(result.statistic),
            "mean_cos": float(np.mean([sample.cos_angle for sample in samples])),
        },
        histogram=angle_histogram(angles),
        tolerance=1.36 / math.sqrt(count),
        passed=result.statistic < 1.36 / math.sqrt(count),
        details={"sampler": sampler},
    )
