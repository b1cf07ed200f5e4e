"""Free flight of a single body: closed form and general geodesic integration."""

import logging
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from components.core.exceptions import InvalidStepError
from components.lie.models import AlgebraVector, EuclideanElement
from components.lie.operations import bracket, group_mul, se_exp, so_exp
from components.mechanics.metric import b_tensor

logger = logging.getLogger(__name__)


def free_flight(
    g: EuclideanElement, xi: AlgebraVector, tau: float
) -> Tuple[EuclideanElement, AlgebraVector]:
    """
    Geodesic motion of a body with scalar inertia over time tau.

    Args:
        g: placement at the start of the flight
        xi: left-translated velocity at the start
        tau: flight time

    Returns:
        (g', xi-) with A' = A exp(tau Z), a' = a + tau A z, Z- = Z, z- = exp(-tau Z) z
    """
    if tau < 0:
        raise InvalidStepError(f"flight time must be nonnegative, got {tau}")
    rotation = so_exp(xi.Z * tau)
    placement = EuclideanElement(g.A @ rotation, g.a + tau * (g.A @ xi.z))
    return placement, AlgebraVector(xi.Z, rotation.T @ xi.z)


@dataclass(frozen=True, eq=False)
class GeodesicTrajectory:
    """Samples of a numerically integrated geodesic."""

    times: np.ndarray
    placements: List[EuclideanElement]
    velocities: List[AlgebraVector]


def _dexpinv(omega: AlgebraVector, xi: AlgebraVector) -> AlgebraVector:
    # inverse of the left-trivialized derivative of exp, truncated after two brackets
    first = bracket(omega, xi)
    return xi + first * 0.5 + bracket(omega, first) * (1.0 / 12.0)


def geodesic_integrate(
    L: np.ndarray, g0: EuclideanElement, xi0: AlgebraVector, T: float, dt: float
) -> GeodesicTrajectory:
    """
    Integrate the geodesic equation xi' = B(xi, xi) with g' = g xi.

    Classical fourth-order Runge-Kutta on the algebra; the placement is
    advanced by the matching Munthe-Kaas stages and se_exp, so it stays on SE(n).

    Args:
        L: inertia matrix (only its ratios to the mass enter)
        g0: initial placement
        xi0: initial left-translated velocity
        T: horizon
        dt: fixed step size

    Returns:
        GeodesicTrajectory sampled at every step, including t=0
    """
    if dt <= 0:
        raise InvalidStepError(f"step size must be positive, got {dt}")
    if T < 0:
        raise InvalidStepError(f"horizon must be nonnegative, got {T}")
    steps = int(round(T / dt))

    def field(xi: AlgebraVector) -> AlgebraVector:
        return b_tensor(L, xi, xi)

    g, xi = g0, xi0
    placements, velocities = [g], [xi]
    for _ in range(steps):
        xi1 = xi
        k1 = field(xi1)
        xi2 = xi + k1 * (0.5 * dt)
        k2 = field(xi2)
        xi3 = xi + k2 * (0.5 * dt)
        k3 = field(xi3)
        xi4 = xi + k3 * dt
        k4 = field(xi4)

        K1 = xi1 * dt
        K2 = _dexpinv(K1 * 0.5, xi2) * dt
        K3 = _dexpinv(K2 * 0.5, xi3) * dt
        K4 = _dexpinv(K3, xi4) * dt
        omega = (K1 + K2 * 2.0 + K3 * 2.0 + K4) * (1.0 / 6.0)

        g = group_mul(g, se_exp(omega.Z, omega.z, 1.0))
        xi = xi + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0)
        placements.append(g)
        velocities.append(xi)

    logger.debug("integrated %d geodesic steps of size %g", steps, dt)
    return GeodesicTrajectory(np.arange(steps + 1) * dt, placements, velocities)
