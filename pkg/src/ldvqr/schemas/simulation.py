"""Schemas for simulated data and the Monte Carlo benchmark."""

import math
from typing import Any

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from ldvqr.schemas.base import DgpName, EstimatorName
from ldvqr.schemas.model import normalize_taus


class DgpOutput(BaseModel):
    """One simulated sample: covariate, latent outcome and observed outcome."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    dgp: DgpName
    seed: int = Field(..., ge=0)
    x: np.ndarray
    y_latent: np.ndarray
    y: np.ndarray = Field(..., description="Observed (censored or binary) outcome")
    c_L: float = -math.inf
    c_H: float = math.inf
    heter: bool | None = None

    @property
    def n(self) -> int:
        """Sample size."""
        return int(self.x.shape[0])

    def columns(self) -> dict[str, np.ndarray]:
        """Named columns for dataset construction."""
        return {"x": self.x, "y": self.y_latent, "y_obs": self.y}


class BenchmarkConfig(BaseModel):
    """Monte Carlo benchmark setup."""

    model_config = ConfigDict(frozen=True)

    dgps: tuple[DgpName, ...] = (DgpName.CENSORED, DgpName.BINARY)
    heter: bool = True
    n: int = Field(2000, ge=10)
    reps: int = Field(20, ge=1, description="Monte Carlo repetitions")
    taus: tuple[float, ...] = (0.2, 0.5, 0.8)
    seed: int = Field(0, ge=0)

    @field_validator("taus", mode="before")
    @classmethod
    def _convert_taus(cls, value: Any) -> tuple[float, ...]:
        return normalize_taus(value)


class BenchmarkRow(BaseModel):
    """Monte Carlo summary for one (dgp, tau, estimator, coefficient) cell."""

    dgp: DgpName
    tau: float | None = Field(None, description="Quantile index; empty on probability rows")
    estimator: EstimatorName
    coef: str
    truth: float
    mean_estimate: float
    bias: float
    mc_se: float
    n: int
    reps: int
