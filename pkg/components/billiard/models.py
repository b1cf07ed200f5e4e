"""Billiard states, trajectories and impact records."""

from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from components.lie.models import AlgebraVector, EuclideanElement, frozen_array


@dataclass(frozen=True, eq=False)
class Hit:
    """Result of a next-collision query."""

    tau: float
    point: np.ndarray
    face: int
    normal: np.ndarray


@dataclass(frozen=True, eq=False)
class BilliardState:
    """
    Placement and post-collision velocity of the moving ball.

    `contact` is the contact point b on the table boundary and `face` the index
    of the boundary piece it lies on; both are None for a launch state in the
    interior of the table.
    """

    g: EuclideanElement
    xi: AlgebraVector
    contact: Optional[np.ndarray] = None
    face: Optional[int] = None
    t: float = 0.0
    rough_rank: int = 0

    def __post_init__(self):
        if self.contact is not None:
            object.__setattr__(self, "contact", frozen_array(self.contact, 1))

    @property
    def n(self) -> int:
        return self.g.n

    @property
    def A(self) -> np.ndarray:
        return self.g.A

    @property
    def a(self) -> np.ndarray:
        return self.g.a

    @property
    def Z(self) -> np.ndarray:
        return self.xi.Z.entries

    @property
    def z(self) -> np.ndarray:
        return self.xi.z

    @property
    def center_velocity(self) -> np.ndarray:
        """World velocity Az of the center of mass."""
        return self.g.A @ self.xi.z

    @property
    def angular_velocity(self) -> np.ndarray:
        """World angular velocity A Z A^T."""
        return self.g.A @ self.xi.Z.entries @ self.g.A.T


@dataclass(frozen=True, eq=False)
class ContactContext:
    """Everything a boundary condition may look at when choosing the involution."""

    face: int
    point: np.ndarray
    normal: np.ndarray
    reference_point: np.ndarray
    g: EuclideanElement


@dataclass(eq=False)
class Trajectory:
    """
    Record of a simulation run.

    `states[i]` is the post-collision state after `flight_times[i]`. When the run
    stops early `reason` holds the error class name and `failed_step` the
    index of the step that failed.
    """

    initial: BilliardState
    states: List[BilliardState] = field(default_factory=list)
    flight_times: List[float] = field(default_factory=list)
    energies: List[float] = field(default_factory=list)
    reason: Optional[str] = None
    message: Optional[str] = None
    failed_step: Optional[int] = None

    @property
    def completed(self) -> bool:
        return self.reason is None

    @property
    def centers(self) -> np.ndarray:
        """Centers of mass at the initial state and at every collision."""
        return np.array([self.initial.a] + [state.a for state in self.states])

    def __len__(self) -> int:
        return len(self.states)
