"""Schemas for the JSON documents written by the command line."""

from pydantic import BaseModel, Field

from ldvqr.schemas.inference import WaldResult
from ldvqr.schemas.model import CoefRow, FitResult, ModelSpec, tau_label
from ldvqr.schemas.simulation import BenchmarkConfig, BenchmarkRow


class TauBlock(BaseModel):
    """Coefficient rows of one quantile equation."""

    tau: float
    coef: list[CoefRow]

    @property
    def label(self) -> str:
        """Equation label such as 'q50'."""
        return tau_label(self.tau)


class FitDiagnostics(BaseModel):
    """Run facts that do not belong to the coefficient table."""

    title: str
    depvar: str
    n: int
    reps_completed: int
    reps_failed: int
    converged: bool
    sigma_source: str
    dropped_rows: int = 0
    crossing_fraction: float | None = None
    messages: list[str] = Field(default_factory=list)


class FitOutput(BaseModel):
    """Output schema for 'ldvqr fit'."""

    spec: ModelSpec
    sigma_hat: float
    bandwidth: float
    per_tau: list[TauBlock]
    V: list[list[float]] = Field(..., description="Joint bootstrap covariance, row-major")
    tests: list[WaldResult] = Field(default_factory=list)
    diagnostics: FitDiagnostics

    @classmethod
    def from_fit(
        cls,
        fit: FitResult,
        tests: list[WaldResult] | None = None,
        dropped_rows: int = 0,
        crossing_fraction: float | None = None,
    ) -> "FitOutput":
        """Assemble the JSON contract from a fit and its tests."""
        blocks = [
            TauBlock(tau=coef.tau, coef=rows)
            for coef, rows in zip(fit.coefs, fit.table(), strict=True)
        ]
        diagnostics = FitDiagnostics(
            title=fit.spec.kind.title,
            depvar=fit.depvar,
            n=fit.n,
            reps_completed=fit.reps_completed,
            reps_failed=fit.reps_failed,
            converged=fit.converged,
            sigma_source=fit.sigma_source,
            dropped_rows=dropped_rows,
            crossing_fraction=crossing_fraction,
            messages=list(fit.diagnostics),
        )
        return cls(
            spec=fit.spec,
            sigma_hat=fit.sigma_hat,
            bandwidth=fit.bandwidth,
            per_tau=blocks,
            V=[list(row) for row in fit.V],
            tests=list(tests or []),
            diagnostics=diagnostics,
        )


class SimulateOutput(BaseModel):
    """Output schema for 'ldvqr simulate'."""

    config: BenchmarkConfig
    rows: list[BenchmarkRow]
