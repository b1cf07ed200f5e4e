"""Quantitative analyses of billiard trajectories."""

import logging
import math
from typing import Dict, List, Optional, Sequence

import numpy as np
from scipy import linalg

from components.core.config import get_settings
from components.core.exceptions import TooFewSegmentsError
from components.contact.frames import adapted_frame
from components.core.rng import random_rotation
from components.billiard.boundary import BoundaryCondition
from components.billiard.dynamics import ball_parameters, collide
from components.billiard.models import ContactContext, Trajectory
from components.billiard.tables import Table
from components.experiments.schemas import ExperimentReport, LongitudinalTrace
from components.lie.models import AlgebraVector, EuclideanElement, SkewMatrix
from components.lie.operations import se_dim, skew_to_vector, so_dim, vector_to_skew
from components.mechanics.models import RigidBody

logger = logging.getLogger(__name__)


def _segment_points(trajectory: Trajectory) -> np.ndarray:
    return np.array([state.a for state in trajectory.states])


def _angle_between(u: np.ndarray, w: np.ndarray) -> float:
    # atan2 of |u ^ w| and u . w keeps precision near 0 and pi
    cross = _wedge_norm(u, w)
    return math.atan2(cross, float(u @ w))


def _line_distance(p: np.ndarray, q: np.ndarray) -> float:
    """Distance from the origin to the line through p and q."""
    direction = q - p
    return _wedge_norm(p, direction) / float(np.linalg.norm(direction))


def _wedge_norm(p: np.ndarray, direction: np.ndarray) -> float:
    return float(np.linalg.norm(np.outer(p, direction) - np.outer(direction, p)) / math.sqrt(2.0))


def caustic_analysis(trajectory: Trajectory, tolerance: float = 1e-9) -> ExperimentReport:
    """
    Vertex angles and caustic radii of a trajectory in a circular table.

    The segments between consecutive collision centers alternate between two
    families, each tangent at its midpoint to a circle centred at the origin.
    The radii are fitted as the mean midpoint distances of the even and the odd
    segments.

    Raises:
        TooFewSegmentsError: with fewer than 3 segments
    """
    points = _segment_points(trajectory)
    if len(points) < 4:
        raise TooFewSegmentsError(
            f"caustic analysis needs at least 3 segments, got {max(len(points) - 1, 0)}"
        )
    vertex_angles = np.array([
        _angle_between(points[i - 1] - points[i], points[i + 1] - points[i])
        for i in range(1, len(points) - 1)
    ])
    midpoints = 0.5 * (points[:-1] + points[1:])
    distances = np.linalg.norm(midpoints, axis=1)
    radii = [float(np.mean(distances[0::2])), float(np.mean(distances[1::2]))]
    radius_spread = max(
        float(np.max(np.abs(distances[0::2] - radii[0]))),
        float(np.max(np.abs(distances[1::2] - radii[1]))),
    )
    tangency = max(
        abs(_line_distance(points[i], points[i + 1]) - radii[i % 2])
        for i in range(len(points) - 1)
    )
    spread = float(np.max(np.abs(vertex_angles - vertex_angles.mean())))
    report = ExperimentReport(
        name="caustics",
        count=len(points) - 1,
        statistics={
            "vertex_angle_mean": float(vertex_angles.mean()),
            "vertex_angle_spread": spread,
            "radius_even": radii[0],
            "radius_odd": radii[1],
            "radius_gap": abs(radii[0] - radii[1]),
            "radius_spread": radius_spread,
            "tangency_residual": float(tangency),
        },
        tolerance=tolerance,
        passed=spread < tolerance and radius_spread < tolerance and tangency < 100 * tolerance,
    )
    logger.info("caustics: vertex angle spread %.3e, radii %.12g / %.12g", spread, *radii)
    return report


def boundedness_report(
    trajectory: Trajectory,
    axes: Sequence[int] = (0, 1),
    growth_factor: Optional[float] = None,
) -> ExperimentReport:
    """
    Horizontal excursion of the center from its starting point.

    The trajectory counts as bounded when the largest excursion over the second
    half of the collisions is at most `growth_factor` times the largest over
    the first half.
    """
    factor = growth_factor if growth_factor is not None else get_settings().BOUNDED_GROWTH_FACTOR
    centers = trajectory.centers[:, list(axes)]
    excursion = np.linalg.norm(centers - centers[0], axis=1)
    half = len(excursion) // 2
    first = float(np.max(excursion[: half + 1]))
    second = float(np.max(excursion[half:]))
    bounded = second <= factor * first
    logger.info("excursion: first half %.6g, second half %.6g, bounded %s", first, second, bounded)
    return ExperimentReport(
        name="bounded",
        count=len(trajectory),
        statistics={
            "max_excursion": float(np.max(excursion)),
            "first_half_excursion": first,
            "second_half_excursion": second,
        },
        tolerance=factor,
        passed=bounded,
    )


def longitudinal_trace(trajectory: Trajectory, axis: int = 0) -> LongitudinalTrace:
    """Coordinate `axis` of the center at every collision, with the flight times."""
    return LongitudinalTrace(
        steps=list(range(1, len(trajectory) + 1)),
        positions=[float(state.a[axis]) for state in trajectory.states],
        flight_times=[float(tau) for tau in trajectory.flight_times],
    )


def mean_square_displacement(paths: np.ndarray) -> np.ndarray:
    """MSD over an ensemble; paths has one row per trajectory, starting at step 0."""
    displacement = paths - paths[:, :1]
    return np.mean(displacement**2, axis=0)


def diffusion_exponent(paths: np.ndarray, first_step: Optional[int] = None, points: int = 20) -> float:
    """
    Slope of log MSD against log step.

    The fit uses `points` log-spaced steps from `first_step` (default 1% of the
    path length, at least 10) to the last step.
    """
    msd = mean_square_displacement(paths)
    last = msd.shape[0] - 1
    start = first_step if first_step is not None else max(10, last // 100)
    if last <= start:
        raise TooFewSegmentsError(f"paths of {last} steps are too short for a fit from step {start}")
    steps = np.unique(np.geomspace(start, last, points).astype(int))
    slope, _ = np.polyfit(np.log(steps), np.log(msd[steps]), 1)
    return float(slope)


def recurrence_report(trajectory: Trajectory) -> ExperimentReport:
    """
    Closest return of the final collision state to an earlier one.

    States are compared through the center, the center velocity and the world
    angular velocity. The report is informational and carries no verdict.
    """
    if len(trajectory) < 2:
        raise TooFewSegmentsError("recurrence needs at least two collisions")
    vectors = np.array([
        np.concatenate([state.a, state.center_velocity,
                        skew_to_vector(SkewMatrix(state.angular_velocity))])
        for state in trajectory.states
    ])
    # distances[k - 1] compares the last state with the one k collisions earlier
    distances = np.linalg.norm(vectors[-2::-1] - vectors[-1], axis=1)
    smallest = float(np.min(distances))
    slack = get_settings().CONTACT_TOLERANCE * max(1.0, float(np.max(np.abs(vectors))))
    period = int(np.argmax(distances <= smallest + slack)) + 1
    return ExperimentReport(
        name="recurrence",
        count=len(trajectory),
        statistics={"min_distance": smallest, "period": float(period)},
    )


def _local_map(
    table: Table, bc: BoundaryCondition, ball: RigidBody, face: int,
    point: np.ndarray, normal: np.ndarray, rotation: np.ndarray, rng: np.random.Generator,
) -> np.ndarray:
    """Matrix of the collision map in scaled coordinates of the adapted frame at `point`."""
    R, lam = ball_parameters(ball)
    n = table.n
    s = so_dim(n)
    scale = math.sqrt(2.0 * lam)
    frame = adapted_frame(normal, 1)
    g = EuclideanElement(rotation, point + R * normal)
    b_circ = rotation.T @ (point - g.a)
    context = ContactContext(face=face, point=point, normal=normal, reference_point=b_circ, g=g)
    T_body = rotation.T @ bc.select(context, rng) @ rotation

    columns = []
    for e in np.eye(se_dim(n)):
        omega_world = frame @ vector_to_skew(e[:s] / scale, n).entries @ frame.T
        v_world = frame @ e[s:]
        xi = AlgebraVector(rotation.T @ omega_world @ rotation, rotation.T @ v_world)
        out = collide(xi, b_circ, T_body, lam, R)
        omega_local = frame.T @ rotation @ out.Z.entries @ rotation.T @ frame
        v_local = frame.T @ rotation @ out.z
        columns.append(np.concatenate([scale * skew_to_vector(SkewMatrix(omega_local)), v_local]))
    return np.column_stack(columns)


def parallelism_check(
    table: Table,
    bc: BoundaryCondition,
    ball: RigidBody,
    rng: np.random.Generator,
    samples: int = 8,
) -> ExperimentReport:
    """
    Whether the field of collision maps is constant in the adapted frames.

    At `samples` random contacts per face (random orientation of the ball) the
    -1 eigenspace of the collision map is computed in scaled coordinates of
    the adapted frame; the largest principal angle between these subspaces on
    the same face is reported.
    """
    R, _ = ball_parameters(ball)
    n = table.n
    worst = 0.0
    per_face: Dict[str, str] = {}
    for face in range(table.face_count):
        spaces: List[np.ndarray] = []
        for _ in range(samples):
            point, normal = table.sample_contact(face, R, rng)
            matrix = _local_map(table, bc, ball, face, point, normal, random_rotation(n, rng), rng)
            spaces.append(linalg.null_space(matrix + np.eye(matrix.shape[0]), rcond=1e-9))
        face_worst = 0.0
        for space in spaces[1:]:
            if space.shape[1] != spaces[0].shape[1]:
                face_worst = math.pi / 2
            elif space.shape[1]:
                face_worst = max(face_worst, float(np.max(linalg.subspace_angles(spaces[0], space))))
        per_face[f"face{face}"] = f"{face_worst:.3e}"
        worst = max(worst, face_worst)
    tolerance = get_settings().SUBSPACE_TOLERANCE
    return ExperimentReport(
        name="parallelism",
        count=samples * table.face_count,
        statistics={"max_subspace_angle": worst},
        tolerance=tolerance,
        passed=worst < tolerance,
        details=per_face,
    )
