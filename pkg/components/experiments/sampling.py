"""Sampling the canonical billiard measure on a face of a box table.

The state space of a ball with L = lambda I is made Euclidean by scaling the
angular coordinates: w = (sqrt(2 lambda) Omega, v), with Omega the world
angular velocity in lower-triangle coordinates and v the center velocity, so
that the kinetic energy is m |w|^2 / 2. On a flat face the measure has density
cos(phi) on the hemisphere of unit directions, phi being the angle to the
inward normal.
"""

import logging
import math
from typing import List

import numpy as np

from components.core.rng import random_rotation
from components.billiard.dynamics import ball_parameters, launch
from components.billiard.models import BilliardState
from components.billiard.tables import BoxTable
from components.experiments.schemas import MeasureSample
from components.lie.models import SkewMatrix
from components.lie.operations import se_dim, skew_to_vector, so_dim
from components.mechanics.models import RigidBody

logger = logging.getLogger(__name__)

SAMPLERS = ("cosine", "uniform")


def angle_cdf(phi: np.ndarray, d: int) -> np.ndarray:
    """
    CDF of the angle to the normal under the cos(phi) density on the unit
    hemisphere of R^d: sin(phi)^(d-1) on [0, pi/2], and (1 + sin phi)/2 on
    [-pi/2, pi/2] for d = 2 where the angle is signed.
    """
    phi = np.asarray(phi, dtype=float)
    if d == 2:
        return 0.5 * (1.0 + np.sin(phi))
    return np.sin(np.clip(phi, 0.0, math.pi / 2)) ** (d - 1)


def angle_density(phi: np.ndarray, d: int) -> np.ndarray:
    """Derivative of angle_cdf; sin(2 phi) for d = 3."""
    phi = np.asarray(phi, dtype=float)
    if d == 2:
        return 0.5 * np.cos(phi)
    return (d - 1) * np.sin(phi) ** (d - 2) * np.cos(phi)


def inverse_cdf_angle(u: np.ndarray, d: int) -> np.ndarray:
    """Angles with CDF angle_cdf from uniform variates u in [0, 1)."""
    u = np.asarray(u, dtype=float)
    if d == 2:
        return np.arcsin(2.0 * u - 1.0)
    return np.arcsin(u ** (1.0 / (d - 1)))


def _face_normal(table: BoxTable, face: int) -> np.ndarray:
    return table.normal(np.zeros(table.n), face)


def sample_billiard_measure(
    table: BoxTable,
    face: int,
    ball: RigidBody,
    energy: float,
    count: int,
    rng: np.random.Generator,
    sampler: str = "cosine",
) -> List[MeasureSample]:
    """
    Initial conditions on one face of a box table.

    Positions are uniform on the face, orientations Haar-uniform and unit
    directions follow the cos(phi) density ("cosine") or, as a control, a
    uniform angle ("uniform").

    Args:
        table: box table
        face: face index (2i for x_i = 0, 2i+1 for x_i = sides_i)
        ball: the ball
        energy: kinetic energy of every sample (only fixes the speed)
        count: number of samples
        rng: random generator
        sampler: "cosine" or "uniform"

    Returns:
        `count` MeasureSample objects
    """
    if count < 1:
        raise ValueError(f"count must be at least 1, got {count}")
    if energy <= 0:
        raise ValueError(f"energy must be positive, got {energy}")
    if sampler not in SAMPLERS:
        raise ValueError(f"unknown sampler {sampler!r}, expected one of {SAMPLERS}")
    if not 0 <= face < table.face_count:
        raise ValueError(f"face must lie in [0, {table.face_count - 1}], got {face}")
    R, _ = ball_parameters(ball)
    n = table.n
    d = se_dim(n)
    axis = face // 2
    inward = _face_normal(table, face)
    normal = np.concatenate([np.zeros(so_dim(n)), inward])

    if sampler == "cosine":
        angles = inverse_cdf_angle(rng.random(count), d)
    elif d == 2:
        angles = rng.uniform(-math.pi / 2, math.pi / 2, size=count)
    else:
        angles = rng.uniform(0.0, math.pi / 2, size=count)

    samples = []
    for phi in angles:
        position = np.array([rng.uniform(R, side - R) for side in table.sides])
        position[axis] = R if face % 2 == 0 else table.sides[axis] - R
        tangent = rng.standard_normal(d)
        tangent -= (tangent @ normal) * normal
        tangent /= np.linalg.norm(tangent)
        direction = math.cos(phi) * normal + math.sin(phi) * tangent
        samples.append(
            MeasureSample(
                face=face,
                position=position.tolist(),
                orientation=random_rotation(n, rng).tolist(),
                direction=direction.tolist(),
                normal=normal.tolist(),
            )
        )
    logger.debug("sampled %d initial conditions on face %d (%s)", count, face, sampler)
    return samples


def sample_to_state(
    sample: MeasureSample, table: BoxTable, ball: RigidBody, energy: float
) -> BilliardState:
    """Post-collision state on the sample's face with kinetic energy `energy`."""
    R, lam = ball_parameters(ball)
    n = table.n
    s = so_dim(n)
    w = math.sqrt(2.0 * energy / ball.mass) * np.asarray(sample.direction)
    position = np.asarray(sample.position)
    inward = _face_normal(table, sample.face)
    return launch(
        table,
        ball,
        position,
        w[s:],
        spin=w[:s] / math.sqrt(2.0 * lam),
        rotation=np.asarray(sample.orientation),
        contact=position - R * inward,
        face=sample.face,
    )


def scaled_velocity(state: BilliardState, lam: float) -> np.ndarray:
    """Euclidean velocity w = (sqrt(2 lambda) Omega, v) of a state."""
    omega = skew_to_vector(SkewMatrix(state.angular_velocity))
    return np.concatenate([math.sqrt(2.0 * lam) * omega, state.center_velocity])


def state_angle(state: BilliardState, table: BoxTable, lam: float) -> float:
    """Angle between a post-collision state's velocity and the normal of its face."""
    w = scaled_velocity(state, lam)
    normal = np.concatenate([np.zeros(so_dim(state.n)), _face_normal(table, state.face)])
    cosine = float(w @ normal) / float(np.linalg.norm(w))
    return float(np.arccos(np.clip(cosine, -1.0, 1.0)))
