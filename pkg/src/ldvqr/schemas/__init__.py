"""Pydantic schemas for ldvqr specifications, results and outputs."""

from ldvqr.schemas.base import (
    CliCommand,
    DgpName,
    EstimatorName,
    ModelKind,
    OptimMethod,
    SymmetryMode,
)
from ldvqr.schemas.cli import CliConfig, FitConfig, SimulateConfig
from ldvqr.schemas.inference import BootstrapRecord, WaldResult
from ldvqr.schemas.model import (
    Bandwidth,
    CoefRow,
    CoefVector,
    FitResult,
    ModelSpec,
    OptimResult,
    ProbitFit,
    TobitFit,
    normalize_taus,
    tau_label,
)
from ldvqr.schemas.output import FitDiagnostics, FitOutput, SimulateOutput, TauBlock
from ldvqr.schemas.prediction import PredictionSet
from ldvqr.schemas.simulation import BenchmarkConfig, BenchmarkRow, DgpOutput

__all__ = [
    # Enums
    "CliCommand",
    "DgpName",
    "EstimatorName",
    "ModelKind",
    "OptimMethod",
    "SymmetryMode",
    # Model
    "Bandwidth",
    "CoefRow",
    "CoefVector",
    "FitResult",
    "ModelSpec",
    "OptimResult",
    "ProbitFit",
    "TobitFit",
    "normalize_taus",
    "tau_label",
    # Inference
    "BootstrapRecord",
    "WaldResult",
    # Prediction
    "PredictionSet",
    # Simulation
    "BenchmarkConfig",
    "BenchmarkRow",
    "DgpOutput",
    # Output
    "FitDiagnostics",
    "FitOutput",
    "SimulateOutput",
    "TauBlock",
    # Command line
    "CliConfig",
    "FitConfig",
    "SimulateConfig",
]
