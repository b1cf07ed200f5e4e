"""Kinematic and impulse subspaces of T_q M at a contact configuration.

Every kinematic subspace is the null space of a matrix of linear relations in
flat coordinates:

    R1  nu1 . (Z1 b1 + z1) + nu2 . (Z2 b2 + z2) = 0       (tangency to the boundary)
    R2  A1 (Z1 b1 + z1) = A2 (Z2 b2 + z2)                  (no slipping)
    R3  Ad_{Aj} Zj = W + n ^ wj,  wj orthogonal to n       (no twisting)
    R4  Ad_{A1} Z1 = Ad_{A2} Z2                            (common rigid motion)

where n = A1 nu1 is the world contact normal. W and wj of R3 are extra
columns of the relation matrix and are projected out after the null-space
computation.
"""

import logging
from typing import Callable, Optional

import numpy as np
from scipy import linalg

from components.core.config import get_settings
from components.core.exceptions import ConfigurationError
from components.contact.frames import tangent_basis
from components.contact.models import (
    Bodies,
    ContactConfiguration,
    MetricProjection,
    SubspaceBasis,
    flatten,
    gram_matrix,
    metric_norm,
    orthonormalize,
    unflatten,
)
from components.lie.models import AlgebraVector, SkewMatrix
from components.lie.operations import adjoint_matrix, se_dim, skew_to_vector, so_dim, wedge
from components.mechanics.inertia import l_inverse
from components.mechanics.models import TangentVector

logger = logging.getLogger(__name__)


def _relation_matrix(relation: Callable[[TangentVector], np.ndarray], n: int) -> np.ndarray:
    """Matrix of a linear relation, evaluated column by column on the flat basis."""
    dim = 2 * se_dim(n)
    return np.column_stack([np.atleast_1d(relation(unflatten(e, n))) for e in np.eye(dim)])


def _contact_velocity(q: ContactConfiguration, v: TangentVector, body: int) -> np.ndarray:
    xi = v[body]
    point = q.b1 if body == 0 else q.b2
    return xi.Z.apply(point) + xi.z


def _tangency_matrix(q: ContactConfiguration) -> np.ndarray:
    return _relation_matrix(
        lambda v: q.nu1 @ _contact_velocity(q, v, 0) + q.nu2 @ _contact_velocity(q, v, 1), q.n
    )


def _nonslip_matrix(q: ContactConfiguration) -> np.ndarray:
    return _relation_matrix(
        lambda v: q.g1.A @ _contact_velocity(q, v, 0) - q.g2.A @ _contact_velocity(q, v, 1), q.n
    )


def _angular_selectors(n: int):
    """Matrices picking the angular coordinates of body 1 and body 2."""
    s, d = so_dim(n), se_dim(n)
    first = np.zeros((s, 2 * d))
    second = np.zeros((s, 2 * d))
    first[:, :s] = np.eye(s)
    second[:, d : d + s] = np.eye(s)
    return first, second


def _null_space(matrix: np.ndarray) -> np.ndarray:
    return linalg.null_space(matrix, rcond=get_settings().NULLSPACE_RCOND)


def _column_span(matrix: np.ndarray) -> np.ndarray:
    left, singular, _ = np.linalg.svd(matrix, full_matrices=False)
    if singular.size == 0:
        return left[:, :0]
    rank = int(np.sum(singular > get_settings().NULLSPACE_RCOND * max(singular[0], 1e-300)))
    return left[:, :rank]


def _finish(matrix: np.ndarray, q: ContactConfiguration, expected: int, name: str,
            bodies: Optional[Bodies]) -> SubspaceBasis:
    if matrix.shape[1] != expected:
        raise ConfigurationError(
            f"{name} subspace has dimension {matrix.shape[1]}, expected {expected}; "
            "the contact configuration is degenerate"
        )
    if bodies is None:
        return SubspaceBasis(matrix, q.n, orthonormal=False)
    return SubspaceBasis(orthonormalize(matrix, gram_matrix(bodies)), q.n, orthonormal=True)


def _twist_relations(q: ContactConfiguration, with_common_motion: bool) -> np.ndarray:
    """Null space, projected to the velocity coordinates, of R2 and R3 (and R4)."""
    n = q.n
    s, dim = so_dim(n), 2 * se_dim(n)
    normal = q.world_normal
    tangents = tangent_basis(normal)
    wedge_normal = np.column_stack(
        [skew_to_vector(wedge(normal, t)) for t in tangents.T]
    ).reshape(s, n - 1)
    first, second = _angular_selectors(n)

    # unknowns: velocity (dim), W (s), w1 (n-1), w2 (n-1)
    width = dim + s + 2 * (n - 1)
    rows = []
    nonslip = np.zeros((n, width))
    nonslip[:, :dim] = _nonslip_matrix(q)
    rows.append(nonslip)
    for body, selector in enumerate((first, second)):
        twist = np.zeros((s, width))
        twist[:, :dim] = adjoint_matrix(q.g1.A if body == 0 else q.g2.A) @ selector
        twist[:, dim : dim + s] = -np.eye(s)
        offset = dim + s + body * (n - 1)
        twist[:, offset : offset + n - 1] = -wedge_normal
        rows.append(twist)
    if with_common_motion:
        common = np.zeros((s, width))
        common[:, :dim] = adjoint_matrix(q.g1.A) @ first - adjoint_matrix(q.g2.A) @ second
        rows.append(common)
    null = _null_space(np.vstack(rows))
    return _column_span(null[:dim])


def boundary_tangent(q: ContactConfiguration, bodies: Optional[Bodies] = None) -> SubspaceBasis:
    """Basis of T_q(boundary of M): the null space of R1."""
    return _finish(_null_space(_tangency_matrix(q)), q, 2 * se_dim(q.n) - 1, "boundary", bodies)


def subspace_nonslip(q: ContactConfiguration, bodies: Optional[Bodies] = None) -> SubspaceBasis:
    """Non-slipping subspace (R2), of dimension 2 dim se(n) - n."""
    n = q.n
    return _finish(_null_space(_nonslip_matrix(q)), q, 2 * se_dim(n) - n, "non-slipping", bodies)


def subspace_rolling(q: ContactConfiguration, bodies: Optional[Bodies] = None) -> SubspaceBasis:
    """Rolling subspace (R2 and R3), of dimension 2 dim se(n) - n - (n-1)(n-2)/2."""
    n = q.n
    expected = 2 * se_dim(n) - n - (n - 1) * (n - 2) // 2
    return _finish(_twist_relations(q, False), q, expected, "rolling", bodies)


def subspace_diag(q: ContactConfiguration, bodies: Optional[Bodies] = None) -> SubspaceBasis:
    """Diagonal subspace (R2, R3 and R4), of dimension dim se(n)."""
    return _finish(_twist_relations(q, True), q, se_dim(q.n), "diagonal", bodies)


def impulse_vector(q: ContactConfiguration, bodies: Bodies, u2: np.ndarray) -> TangentVector:
    """
    Velocity change produced by the contact impulse m2 A2 u2 on body 2.

    Body 1 receives the opposite impulse: u1 = -(m2/m1) A1^T A2 u2.
    """
    body1, body2 = bodies
    u1 = -(body2.mass / body1.mass) * (q.g1.A.T @ q.g2.A @ u2)
    return (
        AlgebraVector(l_inverse(body1.inertia, wedge(q.b1, u1)), u1),
        AlgebraVector(l_inverse(body2.inertia, wedge(q.b2, u2)), u2),
    )


def subspace_impulse(q: ContactConfiguration, bodies: Bodies) -> SubspaceBasis:
    """Impulse subspace, spanned by impulse_vector over the standard basis; dimension n."""
    columns = np.column_stack([flatten(impulse_vector(q, bodies, e)) for e in np.eye(q.n)])
    return _finish(orthonormalize(columns, gram_matrix(bodies)), q, q.n, "impulse", bodies)


def unit_normal(q: ContactConfiguration, bodies: Bodies) -> TangentVector:
    """
    Unit normal to the boundary of M at q, pointing into M.

    Returns:
        (c1 (L1^{-1}(b1 ^ nu1), nu1), c2 (L2^{-1}(b2 ^ nu2), nu2)) with m1 c1 = m2 c2
        and unit kinetic norm
    """
    body1, body2 = bodies
    c1, c2 = 1.0 / body1.mass, 1.0 / body2.mass
    raw = flatten(
        (
            AlgebraVector(l_inverse(body1.inertia, wedge(q.b1, q.nu1)), q.nu1) * c1,
            AlgebraVector(l_inverse(body2.inertia, wedge(q.b2, q.nu2)), q.nu2) * c2,
        )
    )
    gram = gram_matrix(bodies)
    length = metric_norm(raw, gram)
    assert length > 0, "normal vector has zero length"
    normal = raw / length

    # body 2 translating along the world normal separates the bodies
    separating = flatten(
        (AlgebraVector.zeros(q.n), AlgebraVector(SkewMatrix.zeros(q.n), q.g2.A.T @ q.world_normal))
    )
    if separating @ gram @ normal < 0:
        normal = -normal
    return unflatten(normal, q.n)


def impulse_projection(q: ContactConfiguration, bodies: Bodies) -> MetricProjection:
    """Orthogonal projection onto the impulse subspace."""
    return MetricProjection(subspace_impulse(q, bodies).matrix, gram_matrix(bodies))
