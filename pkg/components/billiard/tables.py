"""Billiard tables: boundary normals and closed-form next-collision queries.

Every table works with the region of free motion of the ball's center: the
table shrunk by the ball radius R. A hit of the center on that region's
boundary at a' gives the contact point b' = a' - R nu(b'), nu pointing into
the table.
"""

import logging
import math
from typing import List, Literal, Optional, Tuple, Union

import numpy as np
from pydantic import Field, PositiveFloat, field_validator, model_validator

from components.core.config import get_settings
from components.core.exceptions import CornerHitError, GrazingError, NoCollisionError
from components.core.schemas import FrozenSchema
from components.billiard.models import Hit

logger = logging.getLogger(__name__)


class Table(FrozenSchema):
    """Base class of the table variants."""

    n: int = Field(default=2, ge=2)

    @property
    def face_count(self) -> int:
        raise NotImplementedError

    @property
    def flat(self) -> bool:
        """Whether every boundary piece is a hyperplane."""
        return True

    def normal(self, point: np.ndarray, face: int) -> np.ndarray:
        """Inward unit normal at a boundary point."""
        raise NotImplementedError

    def check_ball(self, R: float) -> None:
        """Raise ValueError when a ball of radius R does not fit."""

    def contains(self, a: np.ndarray, R: float) -> bool:
        """Whether a center position is in the closed free region."""
        raise NotImplementedError

    def sample_contact(
        self, face: int, R: float, rng: np.random.Generator
    ) -> Tuple[np.ndarray, np.ndarray]:
        """Random contact point b' on `face` reachable by a ball of radius R, with its normal."""
        raise NotImplementedError

    def next_collision(self, a: np.ndarray, v: np.ndarray, R: float) -> Hit:
        """
        First impact of the center moving from a with velocity v.

        Impacts earlier than MIN_FLIGHT_FACTOR * R / |v| are ignored so that
        the current contact is not detected again.

        Raises:
            NoCollisionError: the ball escapes or does not move
            GrazingError: the impact is tangential
            CornerHitError: the impact is at a junction of boundary pieces
        """
        a = np.asarray(a, dtype=float)
        v = np.asarray(v, dtype=float)
        speed = float(np.linalg.norm(v))
        if speed == 0.0:
            raise NoCollisionError("ball is at rest")
        tau_min = get_settings().MIN_FLIGHT_FACTOR * R / speed
        tau, face = self._first_impact(a, v, R, tau_min)
        center = a + tau * v
        normal = self._center_normal(center, face)
        if abs(v @ normal) < get_settings().GRAZING_TOLERANCE * speed:
            raise GrazingError(f"tangential impact on face {face}")
        self._check_corner(center, face, R)
        return Hit(tau=tau, point=center - R * normal, face=face, normal=normal)

    def _first_impact(
        self, a: np.ndarray, v: np.ndarray, R: float, tau_min: float
    ) -> Tuple[float, int]:
        raise NotImplementedError

    def _center_normal(self, center: np.ndarray, face: int) -> np.ndarray:
        return self.normal(center, face)

    def _check_corner(self, center: np.ndarray, face: int, R: float) -> None:
        pass


class CircleTable(Table):
    """Ball-shaped table of radius r (a disc for n = 2)."""

    kind: Literal["circle"] = "circle"
    radius: PositiveFloat

    @property
    def face_count(self) -> int:
        return 1

    @property
    def flat(self) -> bool:
        return False

    def normal(self, point: np.ndarray, face: int = 0) -> np.ndarray:
        return -np.asarray(point, dtype=float) / np.linalg.norm(point)

    def check_ball(self, R: float) -> None:
        if not R < self.radius:
            raise ValueError(f"ball radius {R} does not fit in a circle of radius {self.radius}")

    def contains(self, a: np.ndarray, R: float) -> bool:
        return float(np.linalg.norm(a)) <= self.radius - R + get_settings().CONTACT_TOLERANCE

    def sample_contact(self, face, R, rng):
        direction = rng.standard_normal(self.n)
        direction /= np.linalg.norm(direction)
        return self.radius * direction, -direction

    def _first_impact(self, a, v, R, tau_min):
        rho = self.radius - R
        speed2 = float(v @ v)
        b = float(a @ v)
        c = float(a @ a) - rho**2
        root = math.sqrt(max(b * b - speed2 * c, 0.0))
        # larger root of speed2 tau^2 + 2 b tau + c, without cancellation
        if b <= 0:
            tau = (-b + root) / speed2
        elif b + root > 0:
            tau = -c / (b + root)
        else:
            tau = 0.0
        if tau <= tau_min:
            raise NoCollisionError("no impact ahead on the circle")
        return tau, 0


class WedgeTable(Table):
    """
    Planar wedge with apex at the origin, symmetric about the positive x axis.

    Face 0 is the edge at angle +half_angle, face 1 the edge at -half_angle.
    """

    kind: Literal["wedge"] = "wedge"
    half_angle: float = Field(gt=0.0, lt=math.pi / 2)

    @field_validator("n")
    @classmethod
    def planar_only(cls, n: int) -> int:
        if n != 2:
            raise ValueError("wedge tables are planar (n = 2)")
        return n

    @property
    def face_count(self) -> int:
        return 2

    def normal(self, point: np.ndarray, face: int) -> np.ndarray:
        s, c = math.sin(self.half_angle), math.cos(self.half_angle)
        return np.array([s, -c]) if face == 0 else np.array([s, c])

    def contains(self, a: np.ndarray, R: float) -> bool:
        tolerance = get_settings().CONTACT_TOLERANCE
        return all(self.normal(a, face) @ a >= R - tolerance for face in range(2))

    def sample_contact(self, face, R, rng):
        sign = 1.0 if face == 0 else -1.0
        edge = np.array([math.cos(self.half_angle), sign * math.sin(self.half_angle)])
        # keep the ball clear of the other edge
        start = R / math.tan(self.half_angle) + R
        return rng.uniform(start, start + 1.0) * edge, self.normal(edge, face)

    def _first_impact(self, a, v, R, tau_min):
        best: Optional[Tuple[float, int]] = None
        for face in range(2):
            normal = self.normal(a, face)
            approach = float(normal @ v)
            if approach >= 0:
                continue
            tau = (R - float(normal @ a)) / approach
            if tau > tau_min and (best is None or tau < best[0]):
                best = (tau, face)
        if best is None:
            raise NoCollisionError("ball leaves the wedge")
        return best

    def _check_corner(self, center, face, R):
        other = 1 - face
        if self.normal(center, other) @ center - R < get_settings().CORNER_TOLERANCE:
            raise CornerHitError("impact at the apex of the wedge")


def _slab_impacts(
    a: np.ndarray, v: np.ndarray, R: float, tau_min: float, axis: int, length: float
) -> List[Tuple[float, int]]:
    """Impacts on the walls x_axis = 0 (face 2 axis) and x_axis = length (face 2 axis + 1)."""
    velocity = float(v[axis])
    if velocity < 0:
        tau, face = (R - a[axis]) / velocity, 2 * axis
    elif velocity > 0:
        tau, face = (length - R - a[axis]) / velocity, 2 * axis + 1
    else:
        return []
    return [(float(tau), face)] if tau > tau_min else []


def _slab_normal(n: int, face: int) -> np.ndarray:
    normal = np.zeros(n)
    normal[face // 2] = 1.0 if face % 2 == 0 else -1.0
    return normal


class StripTable(Table):
    """
    Region 0 <= x_n <= width between two parallel walls.

    Face 0 is the wall x_n = 0 and face 1 the wall x_n = width.
    """

    kind: Literal["strip"] = "strip"
    width: PositiveFloat

    @property
    def face_count(self) -> int:
        return 2

    @property
    def gap(self) -> float:
        return self.width

    def normal(self, point: np.ndarray, face: int) -> np.ndarray:
        return _slab_normal(self.n, 2 * (self.n - 1) + face)

    def check_ball(self, R: float) -> None:
        if not 2 * R < self.gap:
            raise ValueError(f"ball of radius {R} does not fit between walls {self.gap} apart")

    def contains(self, a: np.ndarray, R: float) -> bool:
        tolerance = get_settings().CONTACT_TOLERANCE
        return R - tolerance <= a[-1] <= self.gap - R + tolerance

    def sample_contact(self, face, R, rng):
        point = rng.uniform(-1.0, 1.0, size=self.n)
        point[-1] = 0.0 if face == 0 else self.gap
        return point, self.normal(point, face)

    def _first_impact(self, a, v, R, tau_min):
        impacts = _slab_impacts(a, v, R, tau_min, self.n - 1, self.gap)
        if not impacts:
            raise NoCollisionError("velocity is parallel to the walls")
        tau, face = impacts[0]
        return tau, face - 2 * (self.n - 1)


class PlatesTable(StripTable):
    """Two parallel plates x_3 = 0 and x_3 = gap in three dimensions."""

    kind: Literal["plates3d"] = "plates3d"
    n: int = 3
    width: PositiveFloat = Field(alias="gap")

    @field_validator("n")
    @classmethod
    def spatial_only(cls, n: int) -> int:
        if n != 3:
            raise ValueError("plates3d tables are three-dimensional")
        return n


class BoxTable(Table):
    """
    Box [0, sides_0] x ... x [0, sides_{n-1}].

    Face 2i is the wall x_i = 0 and face 2i+1 the wall x_i = sides_i.
    """

    kind: Literal["box"] = "box"
    sides: List[PositiveFloat]

    @model_validator(mode="after")
    def sides_match_dimension(self) -> "BoxTable":
        if len(self.sides) != self.n:
            raise ValueError(f"box needs {self.n} sides, got {len(self.sides)}")
        return self

    @property
    def face_count(self) -> int:
        return 2 * self.n

    def normal(self, point: np.ndarray, face: int) -> np.ndarray:
        return _slab_normal(self.n, face)

    def check_ball(self, R: float) -> None:
        if not 2 * R < min(self.sides):
            raise ValueError(f"ball of radius {R} does not fit in a box with sides {self.sides}")

    def contains(self, a: np.ndarray, R: float) -> bool:
        tolerance = get_settings().CONTACT_TOLERANCE
        return all(R - tolerance <= x <= side - R + tolerance for x, side in zip(a, self.sides))

    def sample_contact(self, face, R, rng):
        point = np.array([rng.uniform(R, side - R) for side in self.sides])
        axis = face // 2
        point[axis] = 0.0 if face % 2 == 0 else self.sides[axis]
        return point, self.normal(point, face)

    def _first_impact(self, a, v, R, tau_min):
        impacts = [
            impact
            for axis, side in enumerate(self.sides)
            for impact in _slab_impacts(a, v, R, tau_min, axis, side)
        ]
        if not impacts:
            raise NoCollisionError("ball does not move towards any wall")
        return min(impacts)

    def _check_corner(self, center, face, R):
        tolerance = get_settings().CORNER_TOLERANCE
        for axis, side in enumerate(self.sides):
            if axis == face // 2:
                continue
            if min(center[axis] - R, side - R - center[axis]) < tolerance:
                raise CornerHitError(f"impact on face {face} at an edge with axis {axis}")


AnyTable = Union[CircleTable, WedgeTable, StripTable, PlatesTable, BoxTable]


def build_table(kind: str, n: int, size: Optional[float] = None,
                sides: Optional[List[float]] = None) -> AnyTable:
    """
    Table from its kind and one size parameter.

    `size` is the radius of a circle, the half-angle of a wedge, the width of a
    strip and the gap of plates; boxes take `sides` instead.
    """
    if kind == "circle":
        return CircleTable(n=n, radius=size)
    if kind == "wedge":
        return WedgeTable(n=n, half_angle=size)
    if kind == "strip":
        return StripTable(n=n, width=size)
    if kind == "plates3d":
        return PlatesTable(n=n, gap=size)
    if kind == "box":
        return BoxTable(n=n, sides=list(sides or []))
    raise ValueError(f"unknown table kind {kind!r}")
