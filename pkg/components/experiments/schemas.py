"""Pydantic schemas for experiment samples and reports."""

from typing import Dict, List, Optional

import numpy as np
from pydantic import BaseModel, Field, model_validator

from components.core.schemas import Histogram


class MeasureSample(BaseModel):
    """Schema for one initial condition drawn from the billiard measure."""
    face: int
    position: List[float]
    orientation: List[List[float]]
    direction: List[float]
    normal: List[float]
    weight: float = 1.0

    @model_validator(mode="after")
    def direction_points_inward(self) -> "MeasureSample":
        if len(self.direction) != len(self.normal):
            raise ValueError("direction and normal live in different spaces")
        if not self.cos_angle > 0:
            raise ValueError("sample direction must point into the table")
        return self

    @property
    def cos_angle(self) -> float:
        return float(np.dot(self.direction, self.normal))

    @property
    def angle(self) -> float:
        return float(np.arccos(np.clip(self.cos_angle, -1.0, 1.0)))


class ExperimentReport(BaseModel):
    """Schema for the outcome of one experiment."""
    name: str
    count: int = 0
    statistics: Dict[str, float] = Field(default_factory=dict)
    histogram: Optional[Histogram] = None
    tolerance: Optional[float] = None
    passed: Optional[bool] = None
    details: Dict[str, str] = Field(default_factory=dict)

    @model_validator(mode="after")
    def histogram_matches_count(self) -> "ExperimentReport":
        if self.histogram is not None and self.histogram.total != self.count:
            raise ValueError(
                f"histogram holds {self.histogram.total} samples, report count is {self.count}"
            )
        return self


class LongitudinalTrace(BaseModel):
    """Schema for the position along a strip at every collision."""
    steps: List[int]
    positions: List[float]
    flight_times: List[float]

    @property
    def flight_time_spread(self) -> float:
        """Largest deviation of the flight times after the first collision."""
        times = np.asarray(self.flight_times[1:])
        if times.size == 0:
            return 0.0
        return float(np.max(np.abs(times - times[0])))
