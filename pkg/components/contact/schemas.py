"""Pydantic schemas for contact verification reports."""

from typing import Dict, List

from pydantic import BaseModel, Field


class StrictnessReport(BaseModel):
    """Schema for the strictness check of one collision map."""
    n: int
    rank: int
    isometry: bool
    involution: bool
    identity_on_nonslip: bool
    impulse_membership: bool
    momentum: bool
    residuals: Dict[str, float] = Field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return (self.isometry and self.involution and self.identity_on_nonslip
                and self.impulse_membership and self.momentum)


class OrthogonalityReport(BaseModel):
    """Schema for the orthogonal decomposition of T_q M."""
    n: int
    nonslip_dim: int
    impulse_dim: int
    total_rank: int
    max_cross_inner: float
    normal_residual: float
    passed: bool


class RegularityResult(BaseModel):
    """Schema for the regularity check of two shape operators."""
    regular: bool
    min_singular_value: float
    condition_number: float


class DimensionRow(BaseModel):
    """Schema for one dimension of the Grassmannian table."""
    n: int
    grassmannian: List[int]
    nonslip: int
    rolling: int
    diagonal: int
    impulse: int


class VerificationSummary(BaseModel):
    """Schema for a batch of verification trials."""
    name: str
    trials: int
    failures: int
    max_residuals: Dict[str, float] = Field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.failures == 0
