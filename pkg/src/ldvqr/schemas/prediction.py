"""Schemas for post-estimation predictions."""

import numpy as np
from pydantic import BaseModel, ConfigDict, Field


class PredictionSet(BaseModel):
    """Per-observation prediction columns keyed by output name."""

    model_config = ConfigDict(frozen=True)

    columns: dict[str, tuple[float, ...]] = Field(default_factory=dict)
    m: int = Field(..., ge=1, description="Number of quantiles used")
    pbw: float = Field(..., gt=0, description="Bandwidth for smoothed probabilities")
    crossing_fraction: float | None = Field(
        None, ge=0, le=1, description="Share of rows whose quantile predictions cross"
    )

    def column(self, name: str) -> np.ndarray:
        """One prediction column as a numpy vector."""
        return np.asarray(self.columns[name], dtype=float)
