"""Kinetic-energy metric, momentum map and the B tensor on se(n)."""

from typing import Tuple

import numpy as np

from components.core.exceptions import DimensionMismatchError, SingularInertiaError
from components.lie.models import AlgebraVector, EuclideanElement, SkewMatrix
from components.lie.operations import adjoint, wedge
from components.mechanics.inertia import l_apply, l_inverse
from components.mechanics.models import RigidBody, SystemState, TangentVector


def body_inner(body: RigidBody, u: AlgebraVector, v: AlgebraVector) -> float:
    """Single-body term m[1/2 Tr(L(Z_u) Z_v^T) + z_u . z_v]."""
    if u.n != body.n or v.n != body.n:
        raise DimensionMismatchError(f"body is {body.n}-dimensional, velocities are {u.n} and {v.n}")
    rotational = 0.5 * np.sum(l_apply(body.inertia, u.Z).entries * v.Z.entries)
    return body.mass * (rotational + float(u.z @ v.z))


def kinetic_inner(
    bodies: Tuple[RigidBody, RigidBody], u: TangentVector, v: TangentVector
) -> float:
    """
    Kinetic-energy inner product of two tangent vectors of SE(n) x SE(n).

    Args:
        bodies: the two rigid bodies
        u: first tangent vector, left-translated body by body
        v: second tangent vector

    Returns:
        Sum over bodies of m_j[1/2 Tr(L_j(Z^u_j) Z^v_j^T) + z^u_j . z^v_j]
    """
    return sum(body_inner(body, uj, vj) for body, uj, vj in zip(bodies, u, v))


def energy(body: RigidBody, xi: AlgebraVector) -> float:
    """Kinetic energy of one body."""
    return 0.5 * body_inner(body, xi, xi)


def system_energy(bodies: Tuple[RigidBody, RigidBody], state: SystemState) -> float:
    return 0.5 * kinetic_inner(bodies, state.velocities, state.velocities)


def momentum_pairing(mu: AlgebraVector, eta: AlgebraVector) -> float:
    """Pairing Tr(Z W^T) + z . w between momentum values and algebra elements."""
    return float(np.sum(mu.Z.entries * eta.Z.entries) + mu.z @ eta.z)


def momentum_map(body: RigidBody, g: EuclideanElement, xi: AlgebraVector) -> AlgebraVector:
    """
    Momentum of one body as an element of se(n) under momentum_pairing.

    Returns:
        m * (1/2 (Ad_A L(Z) + x_c ^ v_c), v_c) with x_c = a and v_c = A z
    """
    center_velocity = g.A @ xi.z
    angular = adjoint(g.A, l_apply(body.inertia, xi.Z)) + wedge(g.a, center_velocity)
    return AlgebraVector(angular * (0.5 * body.mass), body.mass * center_velocity)


def total_momentum(bodies: Tuple[RigidBody, RigidBody], state: SystemState) -> AlgebraVector:
    """Sum of the two bodies' momenta."""
    first, second = (
        momentum_map(body, g, xi)
        for body, g, xi in zip(bodies, state.placements, state.velocities)
    )
    return first + second


def b_tensor(L: np.ndarray, xi1: AlgebraVector, xi2: AlgebraVector) -> AlgebraVector:
    """
    Tensor B defined by <B(u, v), w> = <[v, w], u> for the metric of inertia L.

    The angular part solves L(B) = X - X^T with X = [L Z1, Z2] + 1/2 z1 ^ z2;
    for L = lambda*I this is X / lambda.

    Raises:
        SingularInertiaError: when L(.) cannot be inverted
    """
    Z1, Z2 = xi1.Z.entries, xi2.Z.entries
    LZ1 = L @ Z1
    X = LZ1 @ Z2 - Z2 @ LZ1 + 0.5 * wedge(xi1.z, xi2.z).entries
    translational = -Z2 @ xi1.z

    scale = L[0, 0]
    if np.allclose(L, scale * np.eye(L.shape[0]), rtol=0.0, atol=1e-14):
        if scale <= 0:
            raise SingularInertiaError("scalar inertia must be positive", pair=(0, 1),
                                       eigenvalue_sum=2.0 * scale)
        return AlgebraVector(SkewMatrix(X / scale), translational)
    return AlgebraVector(l_inverse(L, SkewMatrix(X - X.T)), translational)