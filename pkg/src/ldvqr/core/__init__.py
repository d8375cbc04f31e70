"""Core infrastructure modules for ldvqr."""

from ldvqr.core.data import Dataset, build_dataset, detect_model_kind, read_table
from ldvqr.core.exceptions import (
    BootstrapUnreliableError,
    ConvergenceError,
    DataError,
    DataFileError,
    DegenerateDataError,
    EmptyDatasetError,
    InvalidSpecError,
    LdvqrError,
    NumericalError,
    OutputParseError,
    SchemaValidationError,
    UnknownColumnError,
)
from ldvqr.core.logger import LdvqrLogger, get_logger
from ldvqr.core.results import ResultsReader
from ldvqr.core.settings import Settings, get_settings

__all__ = [
    "Dataset",
    "build_dataset",
    "detect_model_kind",
    "read_table",
    "ResultsReader",
    "LdvqrLogger",
    "get_logger",
    "Settings",
    "get_settings",
    "LdvqrError",
    "InvalidSpecError",
    "DataError",
    "DataFileError",
    "UnknownColumnError",
    "EmptyDatasetError",
    "DegenerateDataError",
    "NumericalError",
    "ConvergenceError",
    "BootstrapUnreliableError",
    "OutputParseError",
    "SchemaValidationError",
]
