"""Value types for so(n), SE(n) and se(n)."""

import logging
from dataclasses import dataclass

import numpy as np
from scipy import linalg

from components.core.config import get_settings
from components.core.exceptions import DimensionMismatchError, NotARotationError

logger = logging.getLogger(__name__)


def frozen_array(values, ndim: int) -> np.ndarray:
    """Copy `values` into a read-only float array of the given rank."""
    array = np.array(values, dtype=float)
    if array.ndim != ndim:
        raise DimensionMismatchError(f"expected a rank-{ndim} array, got shape {array.shape}")
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class SkewMatrix:
    """Element of so(n); antisymmetrized on construction."""

    entries: np.ndarray

    def __post_init__(self):
        matrix = np.asarray(self.entries, dtype=float)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise DimensionMismatchError(f"skew matrix must be square, got shape {matrix.shape}")
        object.__setattr__(self, "entries", frozen_array(0.5 * (matrix - matrix.T), 2))

    @classmethod
    def zeros(cls, n: int) -> "SkewMatrix":
        return cls(np.zeros((n, n)))

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def apply(self, u: np.ndarray) -> np.ndarray:
        return self.entries @ u

    def norm(self) -> float:
        return float(np.linalg.norm(self.entries))

    def __add__(self, other: "SkewMatrix") -> "SkewMatrix":
        return SkewMatrix(self.entries + other.entries)

    def __sub__(self, other: "SkewMatrix") -> "SkewMatrix":
        return SkewMatrix(self.entries - other.entries)

    def __neg__(self) -> "SkewMatrix":
        return SkewMatrix(-self.entries)

    def __mul__(self, scalar: float) -> "SkewMatrix":
        return SkewMatrix(scalar * self.entries)

    __rmul__ = __mul__


@dataclass(frozen=True, eq=False)
class EuclideanElement:
    """Placement (A, a) of a body: x -> Ax + a."""

    A: np.ndarray
    a: np.ndarray

    def __post_init__(self):
        rotation = np.asarray(self.A, dtype=float)
        translation = frozen_array(self.a, 1)
        n = translation.shape[0]
        if rotation.shape != (n, n):
            raise DimensionMismatchError(
                f"rotation shape {rotation.shape} does not match translation length {n}"
            )
        settings = get_settings()
        drift = float(np.max(np.abs(rotation.T @ rotation - np.eye(n))))
        if drift > settings.ROTATION_REJECT_TOLERANCE or np.linalg.det(rotation) <= 0:
            raise NotARotationError(f"matrix is not in SO({n}): orthogonality drift {drift:.3e}")
        if drift > settings.ROTATION_TOLERANCE:
            logger.debug("re-orthonormalizing rotation, drift %.3e", drift)
            rotation, _ = linalg.polar(rotation)
        object.__setattr__(self, "A", frozen_array(rotation, 2))
        object.__setattr__(self, "a", translation)

    @classmethod
    def identity(cls, n: int) -> "EuclideanElement":
        return cls(np.eye(n), np.zeros(n))

    @property
    def n(self) -> int:
        return self.a.shape[0]

    def act(self, point: np.ndarray) -> np.ndarray:
        """Image g(b) = Ab + a of a body point."""
        return self.A @ point + self.a

    def reorthonormalized(self) -> "EuclideanElement":
        """Nearest element with an exactly orthogonal rotation part (polar decomposition)."""
        rotation, _ = linalg.polar(self.A)
        return EuclideanElement(rotation, self.a)

    def matrix(self) -> np.ndarray:
        """Homogeneous (n+1)x(n+1) matrix."""
        n = self.n
        homogeneous = np.eye(n + 1)
        homogeneous[:n, :n] = self.A
        homogeneous[:n, n] = self.a
        return homogeneous


@dataclass(frozen=True, eq=False)
class AlgebraVector:
    """Left-translated velocity (Z, z) in se(n)."""

    Z: SkewMatrix
    z: np.ndarray

    def __post_init__(self):
        if not isinstance(self.Z, SkewMatrix):
            object.__setattr__(self, "Z", SkewMatrix(self.Z))
        velocity = frozen_array(self.z, 1)
        if velocity.shape[0] != self.Z.n:
            raise DimensionMismatchError(
                f"angular part is {self.Z.n}-dimensional, linear part has length {velocity.shape[0]}"
            )
        object.__setattr__(self, "z", velocity)

    @classmethod
    def zeros(cls, n: int) -> "AlgebraVector":
        return cls(SkewMatrix.zeros(n), np.zeros(n))

    @property
    def n(self) -> int:
        return self.z.shape[0]

    def __add__(self, other: "AlgebraVector") -> "AlgebraVector":
        return AlgebraVector(self.Z + other.Z, self.z + other.z)

    def __sub__(self, other: "AlgebraVector") -> "AlgebraVector":
        return AlgebraVector(self.Z - other.Z, self.z - other.z)

    def __neg__(self) -> "AlgebraVector":
        return AlgebraVector(-self.Z, -self.z)

    def __mul__(self, scalar: float) -> "AlgebraVector":
        return AlgebraVector(self.Z * scalar, scalar * self.z)

    __rmul__ = __mul__
