"""Pydantic schema for a run configuration."""

import math
from pathlib import Path
from typing import Collection, Dict, List, Literal, Optional

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    ValidationError,
    ValidationInfo,
    field_validator,
    model_validator,
)

from components.core.config import get_settings
from components.billiard.boundary import BoundaryCondition, parse_condition
from components.billiard.tables import AnyTable, build_table
from components.experiments.sampling import SAMPLERS
from components.lie.operations import so_dim
from components.mechanics.inertia import ball_body, ball_inertia
from components.mechanics.models import RigidBody

COMMANDS = (
    "simulate",
    "return-angle",
    "caustics",
    "bounded",
    "strip",
    "recurrence",
    "strict",
    "orthogonality",
    "dims",
)

TableKind = Literal["circle", "wedge", "strip", "plates3d", "box"]

DEFAULT_SIZES = {"circle": 2.0, "wedge": math.pi / 6, "strip": 1.0, "plates3d": 1.0}

# validation context flag: leave cross-field checks to the caller
DEFER_CONSISTENCY = "defer_consistency"


class RunConfig(BaseModel):
    """
    Schema for one run: table, ball, boundary condition, initial data and outputs.

    `r` and `R` are accepted as keys for the table size and the ball radius.
    """

    model_config = ConfigDict(populate_by_name=True, extra="forbid")

    command: str = "simulate"
    n: int = 2
    table: TableKind = "circle"
    table_size: Optional[float] = Field(default=None, alias="r")
    sides: Optional[List[float]] = None
    ball_radius: float = Field(default=0.5, alias="R")
    mass: float = 1.0
    inertia: Optional[float] = None
    rough: str = "full"
    steps: int = Field(default=1000, ge=1)
    seed: int = Field(default_factory=lambda: get_settings().DEFAULT_SEED)
    position: Optional[List[float]] = None
    velocity: Optional[List[float]] = None
    spin: Optional[List[float]] = None
    count: int = Field(default=100_000, ge=1)
    trials: int = Field(default=500, ge=1)
    seeds: int = Field(default=100, ge=1)
    k: Optional[int] = None
    workers: int = Field(default=1, ge=1)
    sampler: str = "cosine"
    out: Optional[Path] = None
    svg: Optional[Path] = None

    @field_validator("sides", "position", "velocity", "spin", mode="before")
    @classmethod
    def split_list(cls, value):
        if isinstance(value, str):
            return [item for item in value.replace(" ", "").split(",") if item]
        return value

    @field_validator("command")
    @classmethod
    def known_command(cls, command: str) -> str:
        if command not in COMMANDS:
            raise ValueError(f"unknown command {command!r}, expected one of {', '.join(COMMANDS)}")
        return command

    @field_validator("n")
    @classmethod
    def supported_dimension(cls, n: int) -> int:
        if n not in (2, 3, 4):
            raise ValueError(f"n must be 2, 3 or 4, got {n}")
        return n

    @field_validator("ball_radius", "mass")
    @classmethod
    def positive(cls, value: float) -> float:
        if not value > 0:
            raise ValueError(f"must be positive, got {value}")
        return value

    @field_validator("sampler")
    @classmethod
    def known_sampler(cls, sampler: str) -> str:
        if sampler not in SAMPLERS:
            raise ValueError(f"unknown sampler {sampler!r}, expected one of {', '.join(SAMPLERS)}")
        return sampler

    @model_validator(mode="after")
    def check_consistency(self, info: ValidationInfo) -> "RunConfig":
        n = self.n
        if self.inertia is None:
            self.inertia = ball_inertia(self.ball_radius, n)
        if self.table == "box":
            if self.sides is None:
                self.sides = [2.0] + [1.0] * (n - 1)
            self.table_size = None
        elif self.table_size is None:
            self.table_size = DEFAULT_SIZES[self.table]
        if info.context and info.context.get(DEFER_CONSISTENCY):
            return self
        errors = consistency_errors(self)
        if errors:
            raise ValueError("; ".join(f"{error['key']}: {error['message']}" for error in errors))
        return self

    def build_table(self) -> AnyTable:
        return build_table(self.table, self.n, self.table_size, self.sides)

    def build_ball(self) -> RigidBody:
        return ball_body(self.ball_radius, self.n, self.mass, self.inertia)

    def build_condition(self) -> BoundaryCondition:
        return parse_condition(self.rough, self.n)


def consistency_errors(config: RunConfig, failed: Collection[str] = ()) -> List[Dict[str, str]]:
    """
    Cross-field checks of a run configuration, one {"key", "message"} row per failure.

    Checks that read a key listed in `failed` are skipped, since that key holds a default.
    """
    failed = set(failed)
    errors: List[Dict[str, str]] = []
    if "n" in failed:
        if "inertia" not in failed and not config.inertia > 0:
            errors.append({"key": "inertia", "message": f"must be positive, got {config.inertia}"})
        return errors

    n = config.n
    if "k" not in failed and config.k is not None and not 0 <= config.k <= n - 1:
        message = f"k must lie in [0, {n - 1}] for n={n}, got {config.k}"
        errors.append({"key": "k", "message": message})
    if "inertia" not in failed and not config.inertia > 0:
        errors.append({"key": "inertia", "message": f"must be positive, got {config.inertia}"})
    if "r" not in failed and config.table_size is not None and not config.table_size > 0:
        message = f"table size must be positive, got {config.table_size}"
        errors.append({"key": "r", "message": message})
    for name, expected in (("position", n), ("velocity", n), ("spin", so_dim(n))):
        value = getattr(config, name)
        if name not in failed and value is not None and len(value) != expected:
            errors.append({
                "key": name,
                "message": f"{name} needs {expected} coordinates for n={n}, got {len(value)}",
            })

    size_key = "sides" if config.table == "box" else "r"
    table_keys = {"table", size_key}
    if not (table_keys & failed or any(error["key"] == size_key for error in errors)):
        try:
            table = config.build_table()
        except ValidationError as error:
            messages = "; ".join(item["msg"] for item in error.errors())
            errors.append({"key": "table", "message": f"invalid {config.table} table: {messages}"})
        else:
            if "R" not in failed:
                try:
                    table.check_ball(config.ball_radius)
                except ValueError as error:
                    errors.append({"key": "R", "message": str(error)})

    if "rough" not in failed:
        try:
            parse_condition(config.rough, n)
        except ValueError as error:
            errors.append({"key": "rough", "message": str(error)})
    return errors
