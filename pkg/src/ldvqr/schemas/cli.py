"""Schemas for parsed command-line configurations."""

import math
from pathlib import Path
from typing import Annotated, Any

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ldvqr.schemas.base import CliCommand, ModelKind, SymmetryMode
from ldvqr.schemas.model import ModelSpec, normalize_taus
from ldvqr.schemas.simulation import BenchmarkConfig


class FitConfig(BaseModel):
    """Everything 'ldvqr fit' needs, before the data are read."""

    model_config = ConfigDict(frozen=True)

    input: Path | None = Field(None, description="CSV file with a header row")
    depvar: str | None = None
    covars: tuple[str, ...] = ()
    taus: tuple[float, ...] = (0.5,)
    ll: float | None = Field(None, description="Lower censoring limit")
    ul: float | None = Field(None, description="Upper censoring limit")
    reps: Annotated[int, Field(ge=2)] = 50
    bwidth: Annotated[float, Field(gt=0)] | None = None
    pbwidth: Annotated[float, Field(gt=0)] | None = None
    seed: Annotated[int, Field(ge=0)] = 0
    qcen: str | None = Field(None, description="Prefix for censored quantile predictions")
    pcen: str | None = Field(None, description="Prefix for censoring probabilities")
    p1: str | None = Field(None, description="Prefix for P(y = 1 | x)")
    json_out: Path | None = None
    csv_out: Path | None = None
    homogeneity: tuple[str, ...] = Field((), description="Covariates to test, or ALL")
    symmetry: bool = False
    deltas: tuple[float, ...] | None = None
    symmetry_mode: SymmetryMode = SymmetryMode.PER_DELTA
    replay: Path | None = Field(None, description="Re-print a saved results file")
    save_replicates: Path | None = None
    verbose: bool = False

    @field_validator("taus", mode="before")
    @classmethod
    def _convert_taus(cls, value: Any) -> tuple[float, ...]:
        if value is None or (isinstance(value, list | tuple) and not value):
            return (0.5,)
        return normalize_taus(value)

    @field_validator("deltas", mode="before")
    @classmethod
    def _empty_deltas(cls, value: Any) -> Any:
        return None if isinstance(value, list | tuple) and not value else value

    @model_validator(mode="after")
    def _check(self) -> "FitConfig":
        if self.replay is None:
            if self.input is None:
                raise ValueError(
                    "a data file is required unless --replay is given; "
                    "pass it right after 'fit' (ldvqr fit data.csv --dep y ...)"
                )
            if not self.depvar:
                raise ValueError("--dep is required")
        if self.ll is not None and self.ul is not None and self.ll >= self.ul:
            raise ValueError(f"lower limit {self.ll:g} must be below upper limit {self.ul:g}")
        if (self.qcen or self.pcen or self.p1) and self.csv_out is None:
            raise ValueError("--csv-out is required with --qcen, --pcen or --p1")
        if self.deltas is not None and not self.symmetry:
            object.__setattr__(self, "symmetry", True)
        return self

    def model_spec(self, kind: ModelKind) -> ModelSpec:
        """Translate to a ModelSpec once the model kind is known."""
        return ModelSpec(
            kind=kind,
            c_L=-math.inf if self.ll is None else self.ll,
            c_H=math.inf if self.ul is None else self.ul,
            taus=self.taus,
            reps=self.reps,
            bwidth=self.bwidth,
            pbwidth=self.pbwidth,
            seed=self.seed,
        )


class SimulateConfig(BaseModel):
    """Everything 'ldvqr simulate' needs."""

    model_config = ConfigDict(frozen=True)

    benchmark: BenchmarkConfig
    csv_out: Path | None = None
    json_out: Path | None = None
    verbose: bool = False


class CliConfig(BaseModel):
    """A parsed command line: the subcommand and its configuration."""

    model_config = ConfigDict(frozen=True)

    command: CliCommand
    fit: FitConfig | None = None
    spec: ModelSpec | None = Field(
        None, description="Resolved model for 'fit'; None for --replay and 'simulate'"
    )
    simulate: SimulateConfig | None = None

    @model_validator(mode="after")
    def _one_payload(self) -> "CliConfig":
        payload = self.fit if self.command is CliCommand.FIT else self.simulate
        if payload is None:
            raise ValueError(f"missing configuration for '{self.command}'")
        return self
