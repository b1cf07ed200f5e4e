"""One step of the billiard motion and whole trajectories."""

import logging
import math
from typing import Optional, Sequence, Tuple

import numpy as np

from components.core.config import get_settings
from components.core.exceptions import (
    ContactDistanceError,
    EnergyDriftError,
    NotAnInvolutionError,
    SimulationError,
)
from components.core.rng import make_rng
from components.contact.frames import check_unit
from components.lie.models import AlgebraVector, EuclideanElement, SkewMatrix
from components.lie.operations import vector_to_skew, wedge
from components.mechanics.flight import free_flight
from components.mechanics.metric import energy
from components.mechanics.models import BallDescriptor, RigidBody
from components.billiard.boundary import BoundaryCondition, involution_rank
from components.billiard.models import BilliardState, ContactContext, Hit, Trajectory
from components.billiard.tables import Table

logger = logging.getLogger(__name__)

J = np.array([[0.0, -1.0], [1.0, 0.0]])

# dihedral angle of the regular tetrahedron
BETA = math.acos(1.0 / 3.0)


def ball_parameters(ball: RigidBody) -> Tuple[float, float]:
    """Radius R and inertia coefficient lambda of a ball with L = lambda I."""
    if not isinstance(ball.descriptor, BallDescriptor):
        raise ValueError("billiard bodies must be balls")
    lam = ball.scalar_inertia
    if lam is None or lam <= 0:
        raise ValueError("billiard balls need a positive scalar inertia L = lambda I")
    return ball.descriptor.radius, lam


def next_collision(table: Table, a: np.ndarray, v: np.ndarray, R: float) -> Hit:
    """Time to the next impact and the contact point b' on the table boundary."""
    return table.next_collision(a, v, R)


def reference_contact(g: EuclideanElement, point: np.ndarray, R: float) -> np.ndarray:
    """
    Contact point b_o = g^{-1}(b') on the ball in its reference configuration.

    Raises:
        ContactDistanceError: if b' is not at distance R from the center
    """
    offset = np.asarray(point, dtype=float) - g.a
    distance = float(np.linalg.norm(offset))
    if abs(distance - R) > get_settings().CONTACT_TOLERANCE * max(1.0, R):
        raise ContactDistanceError(f"contact point at distance {distance:.12g} from the center, R={R}")
    return g.A.T @ offset


def collide(
    xi: AlgebraVector, b_circ: np.ndarray, T: np.ndarray, lam: float, R: float
) -> AlgebraVector:
    """
    Post-collision velocity of a ball with inertia L = lambda I.

    Args:
        xi: pre-collision velocity (Z-, z-) in the body frame
        b_circ: contact point on the ball, |b_circ| = R
        T: symmetric involution of the tangent plane at b_circ, as an n x n matrix
        lam: inertia coefficient lambda
        R: ball radius

    Returns:
        (Z- - alpha/(2 lambda) b_o ^ (I - T)V, z- - alpha (I - T)V - 2 P_nu z-) with
        alpha = 1/(1 + R^2/(2 lambda)) and V the tangential velocity of the contact point

    Raises:
        NotAnInvolutionError: if T is not a symmetric involution of the tangent plane
    """
    if lam <= 0:
        raise ValueError(f"inertia coefficient must be positive, got {lam}")
    b_circ = np.asarray(b_circ, dtype=float)
    T = np.asarray(T, dtype=float)
    n = b_circ.shape[0]
    nu = b_circ / np.linalg.norm(b_circ)
    normal_part = np.outer(nu, nu)
    tangent = np.eye(n) - normal_part

    restricted = tangent @ T @ tangent
    residual = max(
        float(np.max(np.abs(restricted @ restricted - tangent))),
        float(np.max(np.abs(restricted - restricted.T))),
        float(np.max(np.abs(normal_part @ T @ tangent))),
    )
    if residual > get_settings().INVOLUTION_TOLERANCE:
        raise NotAnInvolutionError(f"T is not an involution of the tangent plane: residual {residual:.3e}")

    alpha = 1.0 / (1.0 + R**2 / (2.0 * lam))
    V = tangent @ (xi.Z.apply(b_circ) + xi.z)
    W = V - restricted @ V
    Z = xi.Z - wedge(b_circ, W) * (alpha / (2.0 * lam))
    z = xi.z - alpha * W - 2.0 * normal_part @ xi.z
    return AlgebraVector(Z, z)


def collide_2d(v0: float, v: np.ndarray, nu: np.ndarray) -> Tuple[float, np.ndarray]:
    """
    Rough collision of a uniform disc in scaled coordinates.

    Args:
        v0: scaled angular velocity R theta'/sqrt(2)
        v: pre-collision center velocity
        nu: inward unit normal of the table at the contact point

    Returns:
        (v0+, v+)
    """
    nu = check_unit(nu, "nu")
    v = np.asarray(v, dtype=float)
    t = J @ nu
    c, s = 1.0 / 3.0, 2.0 * math.sqrt(2.0) / 3.0
    tangential = float(v @ t)
    return -c * v0 + s * tangential, (s * v0 + c * tangential) * t - float(v @ nu) * nu


def composite_2d(v0: float, v: np.ndarray, nu: np.ndarray) -> Tuple[float, np.ndarray]:
    """
    The rough 2-D collision as two reflections followed by a rotation.

    In the orthonormal frame (e_0, nu, J nu) of angle-position space: reflect in
    the plane of e_0 and J nu, reflect in the plane of nu and J nu, then rotate
    the (e_0, J nu) plane by BETA, carrying J nu towards e_0.
    """
    nu = check_unit(nu, "nu")
    v = np.asarray(v, dtype=float)
    t = J @ nu
    coordinates = np.array([v0, v @ nu, v @ t])
    first = np.diag([1.0, -1.0, 1.0])
    second = np.diag([-1.0, 1.0, 1.0])
    c, s = math.cos(BETA), math.sin(BETA)
    rotation = np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])
    x0, normal, tangential = rotation @ second @ first @ coordinates
    return float(x0), normal * nu + tangential * t


def step(
    state: BilliardState,
    table: Table,
    bc: BoundaryCondition,
    ball: RigidBody,
    rng: np.random.Generator,
) -> BilliardState:
    """
    Advance from one post-collision state to the next.

    Raises:
        NoCollisionError, GrazingError, CornerHitError: from the next-collision query
    """
    R, lam = ball_parameters(ball)
    hit = next_collision(table, state.a, state.center_velocity, R)
    g, xi_minus = free_flight(state.g, state.xi, hit.tau)
    b_circ = reference_contact(g, hit.point, R)
    context = ContactContext(face=hit.face, point=hit.point, normal=hit.normal,
                             reference_point=b_circ, g=g)
    T_world = bc.select(context, rng)
    xi = collide(xi_minus, b_circ, g.A.T @ T_world @ g.A, lam, R)
    return BilliardState(g, xi, hit.point, hit.face, state.t + hit.tau, involution_rank(T_world))


def simulate(
    initial: BilliardState,
    table: Table,
    bc: BoundaryCondition,
    ball: RigidBody,
    steps: int,
    rng: Optional[np.random.Generator] = None,
    check_energy: bool = True,
) -> Trajectory:
    """
    Run `steps` billiard steps.

    A step that raises a SimulationError ends the run; the trajectory keeps the
    states reached so far with the reason and the failing step index.
    With `check_energy` a relative energy change above ENERGY_TOLERANCE ends the
    run with reason EnergyDrift.
    """
    if steps < 1:
        raise ValueError(f"steps must be at least 1, got {steps}")
    rng = rng if rng is not None else make_rng()
    tolerance = get_settings().ENERGY_TOLERANCE
    reference = energy(ball, initial.xi)
    trajectory = Trajectory(initial=initial)
    state = initial
    for index in range(steps):
        previous = state
        try:
            state = step(previous, table, bc, ball, rng)
            current = energy(ball, state.xi)
            if check_energy and abs(current - reference) > tolerance * max(reference, 1e-300):
                raise EnergyDriftError(
                    f"energy changed from {reference:.17g} to {current:.17g}"
                )
        except SimulationError as error:
            error.step = index
            trajectory.reason = error.reason
            trajectory.message = str(error)
            trajectory.failed_step = index
            logger.warning("trajectory stopped at step %d: %s (%s)", index, error.reason, error)
            break
        trajectory.states.append(state)
        trajectory.flight_times.append(state.t - previous.t)
        trajectory.energies.append(current)
        logger.debug("step %d face %s tau %.17g", index, state.face, trajectory.flight_times[-1])
    logger.info("simulated %d of %d steps", len(trajectory), steps)
    return trajectory


def launch(
    table: Table,
    ball: RigidBody,
    position: Sequence[float],
    velocity: Sequence[float],
    spin: Optional[Sequence[float]] = None,
    rotation: Optional[np.ndarray] = None,
    contact: Optional[np.ndarray] = None,
    face: Optional[int] = None,
) -> BilliardState:
    """
    Initial state from world-frame data.

    Args:
        table: table the ball moves in
        ball: the ball
        position: center of mass
        velocity: world velocity of the center
        spin: world angular velocity in so(n) lower-triangle coordinates
        rotation: initial orientation (identity when omitted)
        contact: contact point when launching from the boundary
        face: face of the contact point

    Raises:
        ValueError: if the center is outside the free region
    """
    R, _ = ball_parameters(ball)
    n = table.n
    position = np.asarray(position, dtype=float)
    rotation = np.eye(n) if rotation is None else np.asarray(rotation, dtype=float)
    if position.shape != (n,):
        raise ValueError(f"position must have {n} coordinates")
    if not table.contains(position, R):
        raise ValueError(f"center {position} is outside the free region of the table")
    angular = SkewMatrix.zeros(n) if spin is None else vector_to_skew(np.asarray(spin, dtype=float), n)
    g = EuclideanElement(rotation, position)
    velocity = np.asarray(velocity, dtype=float)
    xi = AlgebraVector(rotation.T @ angular.entries @ rotation, rotation.T @ velocity)
    return BilliardState(g, xi, contact, face)
