"""Schemas for bootstrap records and hypothesis tests."""

import numpy as np
from pydantic import BaseModel, ConfigDict, Field


class WaldResult(BaseModel):
    """Chi-square Wald test of linear restrictions."""

    model_config = ConfigDict(frozen=True)

    name: str = Field("wald", description="Which test produced this result")
    statistic: float = Field(..., ge=0)
    df: int = Field(..., ge=1)
    p_value: float = Field(..., ge=0, le=1)
    constraints: tuple[str, ...] = Field(..., description="Human-readable restrictions")
    warnings: tuple[str, ...] = ()


class BootstrapRecord(BaseModel):
    """Stacked replicate estimates kept for covariance and diagnostics."""

    model_config = ConfigDict(frozen=True)

    replicates: tuple[tuple[float, ...], ...] = Field(
        ..., description="One row per completed replicate, ordered by (tau, coefficient)"
    )
    failures: int = Field(0, ge=0)
    redraws: int = Field(0, ge=0, description="Resamples discarded before a replicate succeeded")
    seed: int = Field(..., ge=0)

    @property
    def matrix(self) -> np.ndarray:
        """Replicates as a B x dim matrix."""
        return np.asarray(self.replicates, dtype=float)

    @property
    def completed(self) -> int:
        """Number of usable replicates."""
        return len(self.replicates)
