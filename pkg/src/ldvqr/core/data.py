"""Estimation-sample construction and model-kind detection."""

import warnings
from collections.abc import Mapping, Sequence
from pathlib import Path
from typing import Any

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from scipy import linalg

from ldvqr.core.exceptions import (
    DataFileError,
    DegenerateDataError,
    EmptyDatasetError,
    RankDeficiencyWarning,
    UnknownColumnError,
)
from ldvqr.core.logger import get_logger
from ldvqr.schemas.base import ModelKind

INTERCEPT = "_cons"
DUMMY_TOL = 1e-12
MISSING_TOKENS = ["NA", ""]

logger = get_logger()


class Dataset(BaseModel):
    """Observed outcome and design matrix of the estimation sample."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    y: np.ndarray = Field(..., description="Observed dependent variable, length n")
    X: np.ndarray = Field(..., description="Design matrix n x K, intercept column last")
    names: tuple[str, ...] = Field(..., description="Column labels of X")
    depvar: str = "y"
    row_index: np.ndarray | None = Field(
        None, description="Positions of the kept rows in the source table"
    )
    dropped: int = Field(0, ge=0, description="Rows removed for missing values")

    @field_validator("y", "X", mode="before")
    @classmethod
    def _own_copy(cls, value: Any) -> np.ndarray:
        return np.array(value, dtype=float)

    @model_validator(mode="after")
    def _check_shapes(self) -> "Dataset":
        if self.y.ndim != 1 or self.X.ndim != 2:
            raise ValueError("y must be a vector and X a matrix")
        if self.X.shape[0] != self.y.shape[0]:
            raise ValueError("y and X must have the same number of rows")
        if self.X.shape[1] != len(self.names):
            raise ValueError("one name per design column is required")
        if not self.n >= self.K >= 1:
            raise ValueError(f"need n >= K >= 1, got n={self.n}, K={self.K}")
        if not (np.all(np.isfinite(self.y)) and np.all(np.isfinite(self.X))):
            raise ValueError("dataset must not contain missing or infinite values")
        self.y.setflags(write=False)
        self.X.setflags(write=False)
        return self

    @property
    def n(self) -> int:
        """Observation count."""
        return int(self.y.shape[0])

    @property
    def K(self) -> int:
        """Coefficient count."""
        return int(self.X.shape[1])

    @property
    def intercept_index(self) -> int | None:
        """Column position of the constant, if any."""
        return self.names.index(INTERCEPT) if INTERCEPT in self.names else None

    def take(self, rows: np.ndarray) -> "Dataset":
        """Row subset (or resample with repeats) of this dataset."""
        return Dataset.model_construct(
            y=self.y[rows],
            X=self.X[rows],
            names=self.names,
            depvar=self.depvar,
            row_index=None,
            dropped=0,
        )


def detect_model_kind(
    y: Sequence[float] | np.ndarray, ll: float | None = None, ul: float | None = None
) -> ModelKind:
    """
    Decide which estimator an outcome calls for.

    Supplied limits force a censored model; otherwise a 0/1 outcome is binary
    and anything else is a plain smoothed quantile regression.

    Raises:
        DegenerateDataError: If y is empty or constant
    """
    values = np.asarray(y, dtype=float)
    if values.size == 0:
        raise DegenerateDataError("degenerate dependent variable: no observations")
    if np.ptp(values) == 0:
        raise DegenerateDataError(
            "degenerate dependent variable",
            hint=f"every observation equals {values[0]:g}",
        )
    if ll is not None or ul is not None:
        return ModelKind.CENSORED
    is_zero = np.abs(values) <= DUMMY_TOL
    is_one = np.abs(values - 1.0) <= DUMMY_TOL
    if np.all(is_zero | is_one) and is_zero.any() and is_one.any():
        return ModelKind.BINARY
    return ModelKind.PLAIN


def build_dataset(
    columns: Mapping[str, Any] | pd.DataFrame,
    depvar: str,
    covars: Sequence[str],
    add_intercept: bool = True,
) -> Dataset:
    """
    Build the estimation sample with listwise deletion of missing values.

    Args:
        columns: Named columns (mapping or DataFrame) of equal length
        depvar: Dependent variable name
        covars: Covariate names, in report order
        add_intercept: Append a constant column named '_cons'

    Returns:
        Dataset whose K equals len(covars) plus one when the intercept is added

    Raises:
        UnknownColumnError: If a requested name is missing
        EmptyDatasetError: If no complete rows remain
    """
    frame = columns if isinstance(columns, pd.DataFrame) else pd.DataFrame(dict(columns))
    available = [str(c) for c in frame.columns]
    for name in [depvar, *covars]:
        if name not in frame.columns:
            raise UnknownColumnError(name, available)

    table = frame.loc[:, [depvar, *covars]].apply(pd.to_numeric, errors="coerce")
    values = table.to_numpy(dtype=float)
    complete = np.all(np.isfinite(values), axis=1)
    dropped = int((~complete).sum())
    if dropped:
        logger.info(f"Dropped {dropped} rows with missing values", dropped=dropped)
    if not complete.any():
        raise EmptyDatasetError(dropped)

    kept = values[complete]
    y = kept[:, 0].copy()
    X = kept[:, 1:]
    names = list(covars)
    if add_intercept:
        X = np.column_stack([X, np.ones(X.shape[0])])
        names.append(INTERCEPT)
    X = np.ascontiguousarray(X)

    dataset = Dataset(
        y=y,
        X=X,
        names=tuple(names),
        depvar=depvar,
        row_index=np.flatnonzero(complete),
        dropped=dropped,
    )
    _warn_rank_deficiency(dataset)
    return dataset


def dependent_columns(X: np.ndarray, names: Sequence[str]) -> list[str]:
    """Columns a pivoted QR decomposition leaves outside the numerical rank."""
    _, r, pivots = linalg.qr(X, mode="economic", pivoting=True)
    diag = np.abs(np.diag(r))
    if diag.size == 0 or diag[0] == 0:
        return list(names)
    tol = diag[0] * max(X.shape) * np.finfo(float).eps
    rank = int(np.sum(diag > tol))
    return [names[i] for i in pivots[rank:]]


def _warn_rank_deficiency(dataset: Dataset) -> None:
    dependent = dependent_columns(dataset.X, dataset.names)
    if dependent:
        message = f"design matrix is rank deficient; dependent columns: {', '.join(dependent)}"
        logger.warning(message, columns=dependent)
        warnings.warn(message, RankDeficiencyWarning, stacklevel=3)


def read_table(path: str | Path) -> pd.DataFrame:
    """
    Read a comma-separated file with a header row; 'NA' and empty cells are missing.

    Raises:
        DataFileError: If the file is missing or malformed
    """
    try:
        return pd.read_csv(
            path,
            sep=",",
            encoding="utf-8",
            na_values=MISSING_TOKENS,
            keep_default_na=False,
        )
    except FileNotFoundError as e:
        raise DataFileError(str(path), "file not found") from e
    except (OSError, UnicodeDecodeError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise DataFileError(str(path), str(e)) from e
