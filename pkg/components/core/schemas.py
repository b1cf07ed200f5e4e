"""Core schemas for the application."""

from typing import List

from pydantic import BaseModel, ConfigDict, field_validator


class FrozenSchema(BaseModel):
    """Immutable schema base; numpy values are allowed as fields."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True, extra="forbid")


class Histogram(BaseModel):
    """Schema for a one-dimensional histogram."""
    edges: List[float]
    counts: List[int]

    @field_validator("counts")
    @classmethod
    def counts_nonnegative(cls, counts: List[int]) -> List[int]:
        if any(count < 0 for count in counts):
            raise ValueError("histogram counts must be nonnegative")
        return counts

    @property
    def total(self) -> int:
        return int(sum(self.counts))
