"""Rigid bodies and two-body states."""

from dataclasses import dataclass, field
from typing import Optional, Tuple, Union

import numpy as np

from components.core.config import get_settings
from components.core.exceptions import DimensionMismatchError
from components.lie.models import AlgebraVector, EuclideanElement, frozen_array

# tangent vector to SE(n) x SE(n), left-translated body by body
TangentVector = Tuple[AlgebraVector, AlgebraVector]


@dataclass(frozen=True)
class BallDescriptor:
    """Rotationally symmetric ball of the given radius."""

    radius: float


@dataclass(frozen=True, eq=False)
class PointSampledDescriptor:
    """Mass measure given by weighted points, centered at the origin."""

    points: np.ndarray
    weights: np.ndarray


@dataclass(frozen=True, eq=False)
class RigidBody:
    """
    Mass distribution of a rigid body.

    `inertia` is the matrix of second moments of the mass measure divided by
    the total mass, expressed in the body frame.
    """

    mass: float
    inertia: np.ndarray
    descriptor: Optional[Union[BallDescriptor, PointSampledDescriptor]] = None
    eigenvalues: np.ndarray = field(init=False, repr=False)
    eigenvectors: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if not self.mass > 0:
            raise ValueError(f"mass must be positive, got {self.mass}")
        inertia = np.asarray(self.inertia, dtype=float)
        if inertia.ndim != 2 or inertia.shape[0] != inertia.shape[1]:
            raise DimensionMismatchError(f"inertia must be square, got shape {inertia.shape}")
        tolerance = get_settings().INERTIA_TOLERANCE * max(1.0, float(np.max(np.abs(inertia))))
        if np.max(np.abs(inertia - inertia.T)) > tolerance:
            raise ValueError("inertia matrix must be symmetric")
        inertia = 0.5 * (inertia + inertia.T)
        values, vectors = np.linalg.eigh(inertia)
        if values[0] < -tolerance:
            raise ValueError(f"inertia matrix has negative eigenvalue {values[0]:.3e}")
        object.__setattr__(self, "inertia", frozen_array(inertia, 2))
        object.__setattr__(self, "eigenvalues", frozen_array(np.clip(values, 0.0, None), 1))
        object.__setattr__(self, "eigenvectors", frozen_array(vectors, 2))

    @property
    def n(self) -> int:
        return self.inertia.shape[0]

    @property
    def scalar_inertia(self) -> Optional[float]:
        """lambda when inertia = lambda * I, otherwise None."""
        values = self.eigenvalues
        if values[-1] - values[0] <= get_settings().INERTIA_TOLERANCE * max(1.0, values[-1]):
            return float(values[-1])
        return None

    @property
    def is_invertible(self) -> bool:
        """Whether Z -> LZ + ZL is invertible on so(n), i.e. rank L >= n - 1."""
        if self.n < 2:
            return True
        values = self.eigenvalues
        return values[0] + values[1] > get_settings().INERTIA_TOLERANCE * max(1.0, values[-1])


@dataclass(frozen=True, eq=False)
class SystemState:
    """State of two bodies: placements and left-translated velocities."""

    placements: Tuple[EuclideanElement, EuclideanElement]
    velocities: TangentVector
