"""Inertia matrices and the operator Z -> LZ + ZL."""

import logging
from typing import Optional, Sequence

import numpy as np

from components.core.config import get_settings
from components.core.exceptions import DimensionMismatchError, SingularInertiaError
from components.lie.models import SkewMatrix
from components.mechanics.models import BallDescriptor, PointSampledDescriptor, RigidBody

logger = logging.getLogger(__name__)


def ball_inertia(R: float, n: int) -> float:
    """Inertia coefficient R^2/(n+2) of a uniform ball of radius R in R^n."""
    if R <= 0 or n < 1:
        raise ValueError(f"ball needs R > 0 and n >= 1, got R={R}, n={n}")
    return R**2 / (n + 2)


def ball_body(R: float, n: int, mass: float = 1.0, inertia: Optional[float] = None) -> RigidBody:
    """
    Rotationally symmetric ball.

    Args:
        R: radius
        n: dimension
        mass: total mass
        inertia: coefficient lambda of L = lambda*I; uniform ball when omitted

    Returns:
        RigidBody with a ball descriptor
    """
    coefficient = ball_inertia(R, n) if inertia is None else float(inertia)
    if coefficient <= 0:
        raise ValueError(f"ball inertia must be positive, got {coefficient}")
    return RigidBody(mass=mass, inertia=coefficient * np.eye(n), descriptor=BallDescriptor(R))


def inertia_from_samples(points: Sequence[np.ndarray], weights: Sequence[float]) -> RigidBody:
    """
    Rigid body from a weighted point cloud.

    Points are recentered when their weighted mean is not at the origin.

    Args:
        points: body-frame sample points
        weights: nonnegative masses of the points

    Returns:
        RigidBody with m = sum of weights and L = (1/m) sum w_k b_k b_k^T
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    weights = np.asarray(weights, dtype=float)
    if points.shape[0] != weights.shape[0]:
        raise DimensionMismatchError(f"{points.shape[0]} points but {weights.shape[0]} weights")
    if np.any(weights < 0):
        raise ValueError("weights must be nonnegative")
    mass = float(weights.sum())
    if mass <= 0:
        raise ValueError("total weight must be positive")

    center = weights @ points / mass
    if np.linalg.norm(center) > get_settings().CONTACT_TOLERANCE:
        logger.warning("recentering point samples, first moment %s", center)
        points = points - center

    inertia = np.einsum("k,kr,ks->rs", weights, points, points) / mass
    body = RigidBody(mass=mass, inertia=inertia, descriptor=PointSampledDescriptor(points, weights))
    if not body.is_invertible:
        logger.warning("inertia has rank below n-1; the operator LZ+ZL is not invertible")
    return body


def l_apply(L: np.ndarray, Z: SkewMatrix) -> SkewMatrix:
    """The operator Z -> LZ + ZL."""
    return SkewMatrix(L @ Z.entries + Z.entries @ L)


def l_inverse(L: np.ndarray, Z: SkewMatrix) -> SkewMatrix:
    """
    Solve LW + WL = Z for skew W.

    In the eigenbasis of L the (i, j) component is divided by the sum of
    eigenvalues lambda_i + lambda_j.

    Raises:
        SingularInertiaError: naming the first pair with lambda_i + lambda_j at or below tolerance
    """
    values, vectors = np.linalg.eigh(0.5 * (L + L.T))
    sums = values[:, None] + values[None, :]
    tolerance = get_settings().INERTIA_TOLERANCE * max(1.0, float(np.max(np.abs(values))))
    n = len(values)
    for i in range(n):
        for j in range(i + 1, n):
            if sums[i, j] <= tolerance:
                raise SingularInertiaError(
                    f"eigenvalues {i} and {j} sum to {sums[i, j]:.3e}; LZ+ZL is not invertible",
                    pair=(i, j),
                    eigenvalue_sum=float(sums[i, j]),
                )
    rotated = vectors.T @ Z.entries @ vectors
    np.fill_diagonal(sums, 1.0)
    return SkewMatrix(vectors @ (rotated / sums) @ vectors.T)
