"""Pytest fixtures for ldvqr tests."""

import os
import tempfile

# Keep log files out of the working tree; must run before ldvqr is imported.
os.environ.setdefault("LDVQR_LOG_DIR", tempfile.mkdtemp(prefix="ldvqr-test-logs-"))

from collections.abc import Callable  # noqa: E402
from pathlib import Path  # noqa: E402

import numpy as np  # noqa: E402
import pandas as pd  # noqa: E402
import pytest  # noqa: E402

from ldvqr.core.data import Dataset, build_dataset  # noqa: E402
from ldvqr.schemas.base import ModelKind  # noqa: E402
from ldvqr.schemas.model import CoefVector, FitResult, ModelSpec  # noqa: E402
from ldvqr.simulate import dgp_binary, dgp_censored  # noqa: E402


def make_fit(
    betas: list[tuple[float, ...]],
    taus: tuple[float, ...],
    names: tuple[str, ...] = ("x", "_cons"),
    V: np.ndarray | None = None,
    kind: ModelKind = ModelKind.CENSORED,
    c_L: float = 0.0,
    c_H: float = 1.0,
    bandwidth: float = 0.1,
) -> FitResult:
    """Hand-built FitResult for prediction and test-statistic checks."""
    dim = len(names) * len(taus)
    V = np.eye(dim) * 0.01 if V is None else V
    unit = kind is ModelKind.BINARY
    spec = (
        ModelSpec(kind=kind, taus=taus)
        if kind is not ModelKind.CENSORED
        else ModelSpec(kind=kind, c_L=c_L, c_H=c_H, taus=taus)
    )
    return FitResult(
        spec=spec,
        depvar="y",
        names=names,
        coefs=tuple(
            CoefVector(tau=tau, beta=beta, unit_norm=unit)
            for tau, beta in zip(taus, betas, strict=True)
        ),
        V=tuple(tuple(row) for row in V.tolist()),
        bandwidth=bandwidth,
        sigma_hat=1.0,
        sigma_source="test",
        n=100,
        reps_completed=10,
    )


@pytest.fixture
def censored_data() -> Dataset:
    """Doubly censored homoscedastic sample, n = 500."""
    sample = dgp_censored(500, heter=False, seed=11)
    return build_dataset({"x": sample.x, "y_c": sample.y}, "y_c", ["x"])


@pytest.fixture
def binary_data() -> Dataset:
    """Binary design sample, n = 500."""
    sample = dgp_binary(500, seed=5)
    return build_dataset({"x": sample.x, "y_b": sample.y}, "y_b", ["x"])


@pytest.fixture
def simulated_csv(tmp_path: Path) -> Path:
    """CSV with a censored, a binary and a latent outcome plus one missing row."""
    censored = dgp_censored(300, heter=True, seed=3)
    binary = dgp_binary(300, seed=4)
    frame = pd.DataFrame(
        {
            "x": censored.x,
            "y": censored.y_latent,
            "y_c": censored.y,
            "x_b": binary.x,
            "y_b": binary.y,
        }
    )
    frame.loc[7, "x"] = np.nan
    path = tmp_path / "data.csv"
    frame.to_csv(path, index=False, na_rep="NA")
    return path


@pytest.fixture(scope="session")
def fit_factory() -> Callable[..., FitResult]:
    """The make_fit builder, for tests that need hand-built results."""
    return make_fit
