"""Schemas for model specifications and estimation results."""

import math
from collections.abc import Sequence
from typing import Annotated, Any

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from scipy.stats import norm

from ldvqr.schemas.base import ModelKind, OptimMethod

# Two-sided 95% normal critical value, as printed in "Normal-based" intervals
Z_975 = 1.959963984540054

TAU_MATCH_TOL = 1e-9


def normalize_taus(values: Sequence[float]) -> tuple[float, ...]:
    """
    Convert quantile indices given as percents (values > 1) or fractions.

    Raises:
        ValueError: If a value falls outside (0, 1) after conversion or the
            list is not strictly increasing
    """
    taus = []
    for value in values:
        tau = float(value)
        if tau > 1:
            tau /= 100.0
        if not 0.0 < tau < 1.0:
            raise ValueError(f"quantile {value} outside (0, 100)")
        taus.append(tau)
    if not taus:
        raise ValueError("at least one quantile is required")
    if any(b <= a for a, b in zip(taus, taus[1:], strict=False)):
        raise ValueError("quantiles must be strictly increasing")
    return tuple(taus)


def tau_label(tau: float) -> str:
    """Equation label for a quantile, e.g. 0.2 -> 'q20', 0.125 -> 'q12.5'."""
    return f"q{round(100 * tau, 6):g}"


class Bandwidth(BaseModel):
    """Smoothing bandwidth h_n."""

    model_config = ConfigDict(frozen=True)

    h: float = Field(..., gt=0, allow_inf_nan=False, description="Bandwidth value")


class ModelSpec(BaseModel):
    """What to estimate: model kind, censoring limits, quantiles and bootstrap setup."""

    model_config = ConfigDict(frozen=True)

    kind: ModelKind = Field(..., description="Censored, binary or plain smoothed QR")
    c_L: float = Field(-math.inf, description="Lower censoring limit (-inf = none)")
    c_H: float = Field(math.inf, description="Upper censoring limit (+inf = none)")
    taus: tuple[float, ...] = Field((0.5,), description="Quantile indices in (0, 1)")
    reps: Annotated[int, Field(ge=2)] = Field(50, description="Bootstrap replications")
    bwidth: Annotated[float, Field(gt=0)] | None = Field(
        None, description="Bandwidth override for the objective"
    )
    pbwidth: Annotated[float, Field(gt=0)] | None = Field(
        None, description="Bandwidth override for smoothed probabilities"
    )
    seed: Annotated[int, Field(ge=0)] = Field(0, description="Master RNG seed")

    @field_validator("taus", mode="before")
    @classmethod
    def _convert_taus(cls, value: Any) -> tuple[float, ...]:
        if isinstance(value, int | float):
            value = (value,)
        return normalize_taus(value)

    @model_validator(mode="after")
    def _check_limits(self) -> "ModelSpec":
        if self.kind is ModelKind.BINARY:
            # Limits carry no meaning for a 0/1 outcome
            object.__setattr__(self, "c_L", -math.inf)
            object.__setattr__(self, "c_H", math.inf)
        elif self.c_L >= self.c_H:
            raise ValueError(f"lower limit {self.c_L} must be below upper limit {self.c_H}")
        return self

    @property
    def is_censored(self) -> bool:
        """Whether at least one censoring limit is finite."""
        return math.isfinite(self.c_L) or math.isfinite(self.c_H)


class CoefVector(BaseModel):
    """Coefficient estimates for one quantile."""

    model_config = ConfigDict(frozen=True)

    tau: float = Field(..., gt=0, lt=1, description="Quantile index")
    beta: tuple[float, ...] = Field(..., description="Coefficients in design column order")
    unit_norm: bool = Field(False, description="Whether beta is normalized to length one")
    objective: float | None = Field(None, description="Smoothed objective at beta")
    converged: bool = Field(True, description="Whether the optimizer reported convergence")

    @model_validator(mode="after")
    def _check_norm(self) -> "CoefVector":
        if self.unit_norm and abs(math.sqrt(sum(b * b for b in self.beta)) - 1.0) > 1e-10:
            raise ValueError("unit_norm coefficients must have Euclidean length one")
        return self

    @property
    def array(self) -> np.ndarray:
        """Coefficients as a numpy vector."""
        return np.asarray(self.beta, dtype=float)


class CoefRow(BaseModel):
    """One printed coefficient line."""

    name: str
    est: float
    se: float
    z: float
    p: float
    ci_lo: float
    ci_hi: float


class OptimResult(BaseModel):
    """Outcome of a minimization."""

    model_config = ConfigDict(frozen=True)

    x_opt: tuple[float, ...]
    f_opt: float
    iterations: int = Field(..., ge=0)
    converged: bool
    method: OptimMethod
    message: str = ""

    @property
    def x(self) -> np.ndarray:
        """Minimizer as a numpy vector."""
        return np.asarray(self.x_opt, dtype=float)


class TobitFit(BaseModel):
    """Gaussian censored regression fit."""

    model_config = ConfigDict(frozen=True)

    beta: tuple[float, ...]
    sigma: float = Field(..., gt=0)
    loglik: float
    converged: bool
    n_lower: int = Field(0, ge=0, description="Observations at or below the lower limit")
    n_upper: int = Field(0, ge=0, description="Observations at or above the upper limit")
    n_uncensored: int = Field(..., ge=1, description="Observations strictly inside the limits")


class ProbitFit(BaseModel):
    """Probit maximum likelihood fit."""

    model_config = ConfigDict(frozen=True)

    beta: tuple[float, ...]
    loglik: float
    converged: bool
    cov: tuple[tuple[float, ...], ...] = Field(
        ..., description="Inverse information matrix at beta"
    )
    message: str = ""


class FitResult(BaseModel):
    """Stacked multi-quantile estimates with their joint bootstrap covariance."""

    model_config = ConfigDict(frozen=True)

    spec: ModelSpec
    depvar: str
    names: tuple[str, ...] = Field(..., description="Coefficient labels, design order")
    coefs: tuple[CoefVector, ...]
    V: tuple[tuple[float, ...], ...] = Field(
        ..., description="Joint covariance ordered by (tau, coefficient)"
    )
    bandwidth: float = Field(..., gt=0)
    sigma_hat: float = Field(..., ge=0)
    sigma_source: str = Field(..., description="Where sigma_hat came from")
    n: int = Field(..., ge=1)
    reps_completed: int = Field(..., ge=0)
    reps_failed: int = Field(0, ge=0)
    converged: bool = True
    diagnostics: tuple[str, ...] = ()
    probit_beta: tuple[float, ...] | None = Field(
        None, description="Raw Probit coefficients of a binary fit, design order"
    )

    @model_validator(mode="after")
    def _check_shapes(self) -> "FitResult":
        dim = len(self.names) * len(self.coefs)
        if len(self.V) != dim or any(len(row) != dim for row in self.V):
            raise ValueError(f"V must be {dim}x{dim}")
        return self

    @property
    def taus(self) -> tuple[float, ...]:
        """Fitted quantile indices."""
        return tuple(c.tau for c in self.coefs)

    @property
    def theta(self) -> np.ndarray:
        """Stacked coefficients ordered by (tau, coefficient)."""
        return np.concatenate([c.array for c in self.coefs])

    @property
    def covariance(self) -> np.ndarray:
        """Joint covariance as a numpy matrix."""
        return np.asarray(self.V, dtype=float)

    @property
    def beta_matrix(self) -> np.ndarray:
        """Coefficients as a K x m matrix, one column per quantile."""
        return np.column_stack([c.array for c in self.coefs])

    def coef_for(self, tau: float) -> CoefVector:
        """
        Look up the coefficient vector of one fitted quantile.

        Raises:
            KeyError: If tau was not fitted
        """
        for coef in self.coefs:
            if abs(coef.tau - tau) <= TAU_MATCH_TOL:
                return coef
        raise KeyError(f"quantile {tau} was not fitted (have {list(self.taus)})")

    def table(self) -> list[list[CoefRow]]:
        """Per-quantile coefficient rows with normal-based inference."""
        theta = self.theta
        se = np.sqrt(np.clip(np.diag(self.covariance), 0.0, None))
        with np.errstate(divide="ignore", invalid="ignore"):
            z = theta / se
        p = 2.0 * norm.sf(np.abs(z))
        k = len(self.names)
        rows: list[list[CoefRow]] = []
        for t in range(len(self.coefs)):
            block = []
            for j, name in enumerate(self.names):
                i = t * k + j
                block.append(
                    CoefRow(
                        name=name,
                        est=float(theta[i]),
                        se=float(se[i]),
                        z=float(z[i]),
                        p=float(p[i]),
                        ci_lo=float(theta[i] - Z_975 * se[i]),
                        ci_hi=float(theta[i] + Z_975 * se[i]),
                    )
                )
            rows.append(block)
        return rows
