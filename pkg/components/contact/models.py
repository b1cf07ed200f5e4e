"""Contact configurations, subspace bases and collision maps.

Tangent vectors of SE(n) x SE(n) are handled in flat coordinates: for each
body the lower-triangle entries of Z followed by z. The kinetic-energy metric
is then the Gram matrix returned by `gram_matrix`.
"""

from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
from scipy import linalg

from components.core.config import get_settings
from components.core.exceptions import ConfigurationError, DimensionMismatchError
from components.contact.frames import adapted_frame, check_unit
from components.lie.models import AlgebraVector, EuclideanElement, frozen_array
from components.lie.operations import se_dim, skew_to_vector, so_dim, vector_to_skew
from components.mechanics.metric import body_inner
from components.mechanics.models import RigidBody, TangentVector

Bodies = Tuple[RigidBody, RigidBody]


def flatten(v: TangentVector) -> np.ndarray:
    """Flat coordinates of a tangent vector."""
    return np.concatenate([np.concatenate([skew_to_vector(xi.Z), xi.z]) for xi in v])


def unflatten(x: np.ndarray, n: int) -> TangentVector:
    """Inverse of flatten."""
    x = np.asarray(x, dtype=float)
    s, d = so_dim(n), se_dim(n)
    if x.shape != (2 * d,):
        raise DimensionMismatchError(f"expected {2 * d} coordinates, got {x.shape}")
    return tuple(
        AlgebraVector(vector_to_skew(x[k * d : k * d + s], n), x[k * d + s : (k + 1) * d])
        for k in range(2)
    )


def gram_matrix(bodies: Bodies) -> np.ndarray:
    """Matrix of kinetic_inner in flat coordinates."""
    n = bodies[0].n
    d = se_dim(n)
    gram = np.zeros((2 * d, 2 * d))
    for k, body in enumerate(bodies):
        basis = [unflatten(np.eye(2 * d)[k * d + i], n)[k] for i in range(d)]
        for i, u in enumerate(basis):
            for j, v in enumerate(basis[: i + 1]):
                gram[k * d + i, k * d + j] = gram[k * d + j, k * d + i] = body_inner(body, u, v)
    return gram


class MetricProjection:
    """Orthogonal projection onto the column span of a matrix, for the inner product `gram`."""

    def __init__(self, basis: np.ndarray, gram: np.ndarray):
        self.basis = orthonormalize(basis, gram)
        self.gram = gram
        self.Q = self.basis @ self.basis.T @ gram

    def project(self, x: np.ndarray) -> np.ndarray:
        return self.Q @ x

    def o_project(self, x: np.ndarray) -> np.ndarray:
        """Projection onto the orthogonal complement."""
        return x - self.Q @ x

    def residual(self, x: np.ndarray) -> float:
        """Metric norm of the part of x outside the subspace."""
        return metric_norm(self.o_project(x), self.gram)


def metric_norm(x: np.ndarray, gram: np.ndarray) -> float:
    return float(np.sqrt(max(x @ gram @ x, 0.0)))


def orthonormalize(matrix: np.ndarray, gram: np.ndarray) -> np.ndarray:
    """
    Orthonormal basis (for `gram`) of the column span of `matrix`.

    Columns that are dependent up to NULLSPACE_RCOND are discarded.
    """
    matrix = np.atleast_2d(np.asarray(matrix, dtype=float))
    if matrix.shape[1] == 0:
        return matrix
    factor = linalg.cholesky(gram, lower=True)
    # Euclidean coordinates y = factor^T x
    left, singular, _ = np.linalg.svd(factor.T @ matrix, full_matrices=False)
    rank = int(np.sum(singular > get_settings().NULLSPACE_RCOND * max(singular[0], 1e-300)))
    return linalg.solve_triangular(factor.T, left[:, :rank], lower=False)


@dataclass(frozen=True, eq=False)
class ContactConfiguration:
    """Two placements touching at one point, with normals and adapted frames."""

    g1: EuclideanElement
    g2: EuclideanElement
    b1: np.ndarray
    b2: np.ndarray
    nu1: np.ndarray
    nu2: np.ndarray
    sigma1: np.ndarray
    sigma2: np.ndarray
    S1: Optional[np.ndarray] = None
    S2: Optional[np.ndarray] = None

    def __post_init__(self):
        n = self.g1.n
        if self.g2.n != n:
            raise DimensionMismatchError("placements of different dimension")
        for name in ("b1", "b2", "nu1", "nu2"):
            value = frozen_array(getattr(self, name), 1)
            if value.shape != (n,):
                raise DimensionMismatchError(f"{name} must be an {n}-vector")
            object.__setattr__(self, name, value)
        for name in ("sigma1", "sigma2"):
            object.__setattr__(self, name, frozen_array(getattr(self, name), 2))
        check_unit(self.nu1, "nu1")
        check_unit(self.nu2, "nu2")

        tolerance = get_settings().CONTACT_TOLERANCE
        gap = np.linalg.norm(self.g1.act(self.b1) - self.g2.act(self.b2))
        if gap > tolerance:
            raise ConfigurationError(f"contact points do not coincide: distance {gap:.3e}")
        for name, sigma in (("sigma1", self.sigma1), ("sigma2", self.sigma2)):
            if (np.max(np.abs(sigma.T @ sigma - np.eye(n))) > tolerance
                    or np.linalg.det(sigma) <= 0):
                raise ConfigurationError(f"{name} is not a rotation")
        if np.max(np.abs(self.g1.A @ self.sigma1 - self.g2.A @ self.sigma2)) > tolerance:
            raise ConfigurationError("adapted frames disagree: A1 sigma1 != A2 sigma2")
        if np.max(np.abs(self.sigma1[:, -1] - self.nu1)) > tolerance:
            raise ConfigurationError("sigma1 e_n must equal nu1")
        if np.max(np.abs(self.sigma2[:, -1] + self.nu2)) > tolerance:
            raise ConfigurationError("sigma2 e_n must equal -nu2")

    @classmethod
    def from_contact(
        cls,
        g1: EuclideanElement,
        b1: np.ndarray,
        nu1: np.ndarray,
        A2: np.ndarray,
        b2: np.ndarray,
        S1: Optional[np.ndarray] = None,
        S2: Optional[np.ndarray] = None,
    ) -> "ContactConfiguration":
        """
        Place body 2 with rotation A2 so that its point b2 touches g1(b1).

        The normal nu2 is the one opposite to nu1 in the world frame.
        """
        nu1 = check_unit(nu1, "nu1")
        b2 = np.asarray(b2, dtype=float)
        nu2 = -A2.T @ g1.A @ nu1
        g2 = EuclideanElement(A2, g1.act(np.asarray(b1, dtype=float)) - A2 @ b2)
        sigma1 = adapted_frame(nu1, 1)
        sigma2 = g2.A.T @ g1.A @ sigma1
        return cls(g1, g2, b1, b2, nu1, nu2, sigma1, sigma2, S1, S2)

    @property
    def n(self) -> int:
        return self.g1.n

    @property
    def world_normal(self) -> np.ndarray:
        """A1 nu1, pointing from body 1 towards body 2."""
        return self.g1.A @ self.nu1

    @property
    def contact_point(self) -> np.ndarray:
        return self.g1.act(self.b1)


@dataclass(frozen=True, eq=False)
class SubspaceBasis:
    """Basis of a subspace of T_q M, stored as columns in flat coordinates."""

    matrix: np.ndarray
    n: int
    orthonormal: bool = False

    def __post_init__(self):
        matrix = np.asarray(self.matrix, dtype=float)
        if matrix.ndim == 1:
            matrix = matrix[:, None]
        if matrix.shape[0] != 2 * se_dim(self.n):
            raise DimensionMismatchError(f"expected {2 * se_dim(self.n)} rows, got {matrix.shape[0]}")
        if matrix.shape[1] and np.linalg.matrix_rank(matrix) < matrix.shape[1]:
            raise ConfigurationError("subspace basis vectors are linearly dependent")
        object.__setattr__(self, "matrix", frozen_array(matrix, 2))

    @property
    def dim(self) -> int:
        return self.matrix.shape[1]

    @property
    def vectors(self) -> List[TangentVector]:
        return [unflatten(column, self.n) for column in self.matrix.T]


@dataclass(frozen=True, eq=False)
class CollisionMap:
    """Strict collision map: -1 on the normal and the roughness subspace, +1 elsewhere."""

    n: int
    roughness: np.ndarray
    normal: np.ndarray
    matrix: np.ndarray
    gram: np.ndarray

    @property
    def rank(self) -> int:
        """Roughness rank k."""
        return self.roughness.shape[1]

    @property
    def roughness_basis(self) -> SubspaceBasis:
        return SubspaceBasis(self.roughness, self.n, orthonormal=True)

    def apply(self, v: TangentVector) -> TangentVector:
        return unflatten(self.matrix @ flatten(v), self.n)
