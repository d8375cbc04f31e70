"""Base enums shared by the ldvqr schemas."""

from enum import StrEnum


class ModelKind(StrEnum):
    """Which estimator the dependent variable calls for."""

    CENSORED = "censored"
    BINARY = "binary"
    PLAIN = "plain"

    @property
    def title(self) -> str:
        """Header printed above coefficient tables."""
        return {
            ModelKind.CENSORED: "Censored quantile regression",
            ModelKind.BINARY: "Binary quantile regression",
            ModelKind.PLAIN: "Smoothed quantile regression",
        }[self]


class OptimMethod(StrEnum):
    """Optimizer family used for a minimization."""

    QUASI_NEWTON = "quasi_newton"
    SIMPLEX = "simplex"


class SymmetryMode(StrEnum):
    """How the symmetry test combines several deltas."""

    PER_DELTA = "per_delta"
    AVERAGED = "averaged"


class DgpName(StrEnum):
    """Simulation designs available to the benchmark."""

    CENSORED = "censored"
    POOLED = "pooled"
    BINARY = "binary"
    TOBIT_CONTRAST = "tobit_contrast"


class EstimatorName(StrEnum):
    """Estimators compared in the benchmark table."""

    NAIVE = "naive"
    CORRECTED = "corrected"
    TOBIT = "tobit"
    PROBIT = "probit"


class CliCommand(StrEnum):
    """Subcommands of the command line."""

    FIT = "fit"
    SIMULATE = "simulate"
