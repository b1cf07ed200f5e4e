"""Boundary conditions: fields of collision maps over the table boundary.

A boundary condition chooses, at every impact, an involution T of the contact
tangent plane in the world frame. T is returned as an n x n matrix equal to
I - 2 D D^T, where the orthonormal columns of D are the rough directions; it
acts as the identity on the normal line.

Text grammar (used by the command line and run configuration files):

    none | smooth                  specular reflection
    full                           completely rough
    rank:K[:ANGLE]                 K rough directions, frame rotated by ANGLE
    hemisphere[:AXIS]              rough where b_o . e_AXIS > 0, smooth elsewhere
    random:P                       completely rough with probability P, else smooth
    random:rank:K:A1,A2,...        rank K with an angle drawn uniformly from the list
    faces:COND/COND/...            one condition per face index
"""

import math
from typing import Annotated, List, Literal, Union

import numpy as np
from pydantic import Field, model_validator

from components.core.schemas import FrozenSchema
from components.contact.frames import tangent_basis
from components.billiard.models import ContactContext


def rough_directions(normal: np.ndarray, rank: int, angle: float = 0.0) -> np.ndarray:
    """
    n x rank matrix of rough directions in the plane orthogonal to `normal`.

    The tangent frame is the adapted frame of the normal with its first two
    columns rotated by `angle`.
    """
    n = normal.shape[0]
    if not 0 <= rank <= n - 1:
        raise ValueError(f"roughness rank must lie in [0, {n - 1}], got {rank}")
    frame = tangent_basis(normal).copy()
    if n >= 3:
        first, second = frame[:, 0].copy(), frame[:, 1].copy()
        frame[:, 0] = math.cos(angle) * first + math.sin(angle) * second
        frame[:, 1] = -math.sin(angle) * first + math.cos(angle) * second
    return frame[:, :rank]


def involution(directions: np.ndarray) -> np.ndarray:
    return np.eye(directions.shape[0]) - 2.0 * directions @ directions.T


def involution_rank(T: np.ndarray) -> int:
    """Number of rough directions of an involution built by `involution`."""
    return int(round((T.shape[0] - float(np.trace(T))) / 2.0))


class ConstantCondition(FrozenSchema):
    """The same roughness rank and direction angle at every impact."""

    kind: Literal["constant"] = "constant"
    rank: int = Field(default=0, ge=0)
    angle: float = 0.0
    full: bool = False

    def rank_for(self, n: int) -> int:
        return n - 1 if self.full else self.rank

    def select(self, context: ContactContext, rng: np.random.Generator) -> np.ndarray:
        normal = context.normal
        return involution(rough_directions(normal, self.rank_for(normal.shape[0]), self.angle))


class HemisphereCondition(FrozenSchema):
    """Completely rough on the half of the ball surface where b_o . e_axis > 0."""

    kind: Literal["hemisphere"] = "hemisphere"
    axis: int = Field(default=0, ge=0)

    def select(self, context: ContactContext, rng: np.random.Generator) -> np.ndarray:
        n = context.normal.shape[0]
        if self.axis >= n:
            raise ValueError(f"hemisphere axis {self.axis} out of range for n={n}")
        rough = context.reference_point[self.axis] > 0
        return involution(rough_directions(context.normal, n - 1 if rough else 0))


class RandomCondition(FrozenSchema):
    """A constant condition drawn independently at every impact."""

    kind: Literal["random"] = "random"
    outcomes: List[ConstantCondition]
    probabilities: List[float]

    @model_validator(mode="after")
    def check_distribution(self) -> "RandomCondition":
        if not self.outcomes or len(self.outcomes) != len(self.probabilities):
            raise ValueError("random condition needs one probability per outcome")
        if any(p < 0 for p in self.probabilities) or abs(sum(self.probabilities) - 1.0) > 1e-12:
            raise ValueError("probabilities must be nonnegative and sum to 1")
        return self

    def select(self, context: ContactContext, rng: np.random.Generator) -> np.ndarray:
        index = int(rng.choice(len(self.outcomes), p=self.probabilities))
        return self.outcomes[index].select(context, rng)


SimpleCondition = Annotated[
    Union[ConstantCondition, HemisphereCondition, RandomCondition], Field(discriminator="kind")
]


class FacesCondition(FrozenSchema):
    """One condition per boundary face."""

    kind: Literal["faces"] = "faces"
    conditions: List[SimpleCondition]

    def select(self, context: ContactContext, rng: np.random.Generator) -> np.ndarray:
        if context.face >= len(self.conditions):
            raise ValueError(f"no boundary condition given for face {context.face}")
        return self.conditions[context.face].select(context, rng)


BoundaryCondition = Union[ConstantCondition, HemisphereCondition, RandomCondition, FacesCondition]


def specular() -> ConstantCondition:
    return ConstantCondition()


def completely_rough() -> ConstantCondition:
    return ConstantCondition(full=True)


def _parse_simple(text: str, n: int) -> SimpleCondition:
    parts = text.strip().split(":")
    head = parts[0]
    if head in ("none", "smooth") and len(parts) == 1:
        return specular()
    if head == "full" and len(parts) == 1:
        return completely_rough()
    if head == "rank" and len(parts) in (2, 3):
        rank = int(parts[1])
        if not 0 <= rank <= n - 1:
            raise ValueError(f"roughness rank must lie in [0, {n - 1}], got {rank}")
        angle = float(parts[2]) if len(parts) == 3 else 0.0
        return ConstantCondition(rank=rank, angle=angle)
    if head == "hemisphere" and len(parts) in (1, 2):
        axis = int(parts[1]) if len(parts) == 2 else 0
        if not 0 <= axis < n:
            raise ValueError(f"hemisphere axis must lie in [0, {n - 1}], got {axis}")
        return HemisphereCondition(axis=axis)
    if head == "random" and len(parts) == 2:
        probability = float(parts[1])
        if not 0.0 <= probability <= 1.0:
            raise ValueError(f"probability must lie in [0, 1], got {probability}")
        return RandomCondition(
            outcomes=[completely_rough(), specular()],
            probabilities=[probability, 1.0 - probability],
        )
    if head == "random" and len(parts) == 4 and parts[1] == "rank":
        rank = int(parts[2])
        if not 0 <= rank <= n - 1:
            raise ValueError(f"roughness rank must lie in [0, {n - 1}], got {rank}")
        angles = [float(value) for value in parts[3].split(",") if value]
        if not angles:
            raise ValueError("random rank condition needs at least one angle")
        return RandomCondition(
            outcomes=[ConstantCondition(rank=rank, angle=angle) for angle in angles],
            probabilities=[1.0 / len(angles)] * len(angles),
        )
    raise ValueError(f"cannot parse boundary condition {text!r}")


def parse_condition(text: str, n: int) -> BoundaryCondition:
    """
    Parse the boundary-condition grammar for dimension n.

    Raises:
        ValueError: on malformed text or out-of-range ranks and axes
    """
    text = text.strip()
    if text.startswith("faces:"):
        items = text[len("faces:") :].split("/")
        if not all(items):
            raise ValueError(f"empty face condition in {text!r}")
        return FacesCondition(conditions=[_parse_simple(item, n) for item in items])
    return _parse_simple(text, n)
