"""Unit tests for estimation-sample construction."""

from pathlib import Path

import numpy as np
import pandas as pd
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ldvqr.core.data import build_dataset, dependent_columns, detect_model_kind, read_table
from ldvqr.core.exceptions import (
    DataFileError,
    DegenerateDataError,
    EmptyDatasetError,
    RankDeficiencyWarning,
    UnknownColumnError,
)
from ldvqr.schemas.base import ModelKind

outcomes = st.lists(
    st.sampled_from([0.0, 1.0]) | st.floats(min_value=-5, max_value=5, allow_nan=False),
    min_size=1,
    max_size=40,
)


@pytest.mark.unit
class TestDetectModelKind:
    """Tests for detect_model_kind."""

    def test_limits_force_censored(self) -> None:
        """Limits win, even for a 0/1 outcome."""
        assert detect_model_kind([0, 1, 0.5], ll=0.0) is ModelKind.CENSORED
        assert detect_model_kind([0, 1, 1], ul=1.0) is ModelKind.CENSORED

    def test_dummy_is_binary(self) -> None:
        """Exactly two values 0 and 1 select the binary model."""
        assert detect_model_kind([0.0, 1.0, 1.0, 1e-13]) is ModelKind.BINARY

    def test_other_outcomes_are_plain(self) -> None:
        """Anything else is a plain smoothed regression."""
        assert detect_model_kind([0.0, 1.0, 2.0]) is ModelKind.PLAIN
        assert detect_model_kind([1.0, 2.0]) is ModelKind.PLAIN

    def test_constant_outcome(self) -> None:
        """A constant outcome cannot be fitted."""
        with pytest.raises(DegenerateDataError, match="degenerate dependent variable"):
            detect_model_kind([1.0, 1.0, 1.0])

    @given(y=outcomes, data=st.data())
    def test_row_order_does_not_matter(self, y: list[float], data: st.DataObject) -> None:
        """Any permutation of the outcome resolves to the same kind, or fails the same way."""
        shuffled = data.draw(st.permutations(y))

        def resolve(values: list[float]) -> ModelKind | type[Exception]:
            try:
                return detect_model_kind(values)
            except DegenerateDataError as e:
                return type(e)

        assert resolve(shuffled) == resolve(y)

    def test_empty_outcome(self) -> None:
        """An empty outcome cannot be fitted."""
        with pytest.raises(DegenerateDataError):
            detect_model_kind([])


@pytest.mark.unit
class TestBuildDataset:
    """Tests for build_dataset."""

    def test_intercept_last(self) -> None:
        """The constant is appended after the covariates."""
        d = build_dataset({"y": [1.0, 2.0, 3.0], "x": [0.1, 0.5, 0.2]}, "y", ["x"])

        assert d.names == ("x", "_cons")
        assert d.intercept_index == 1
        np.testing.assert_array_equal(d.X[:, 1], 1.0)
        assert (d.n, d.K) == (3, 2)

    def test_listwise_deletion(self) -> None:
        """Rows with any missing value are dropped and counted."""
        frame = pd.DataFrame({"y": [1.0, np.nan, 3.0, 4.0], "x": [0.1, 0.2, np.nan, 0.4]})

        d = build_dataset(frame, "y", ["x"])

        assert d.n == 2
        assert d.dropped == 2
        np.testing.assert_array_equal(d.row_index, [0, 3])

    def test_unknown_column(self) -> None:
        """Missing variables are reported by name."""
        with pytest.raises(UnknownColumnError, match="z"):
            build_dataset({"y": [1.0], "x": [1.0]}, "y", ["z"])

    def test_all_rows_missing(self) -> None:
        """No complete rows leaves nothing to fit."""
        with pytest.raises(EmptyDatasetError):
            build_dataset({"y": [np.nan, np.nan], "x": [1.0, 2.0]}, "y", ["x"])

    def test_rank_deficiency_warns(self) -> None:
        """Collinear columns are kept but flagged."""
        x = np.arange(6.0)
        with pytest.warns(RankDeficiencyWarning, match="rank deficient"):
            build_dataset({"y": x**2, "a": x, "b": 2 * x}, "y", ["a", "b"])

    def test_dataset_is_read_only(self) -> None:
        """The sample cannot be changed in place."""
        d = build_dataset({"y": [1.0, 2.0, 3.0], "x": [0.1, 0.5, 0.2]}, "y", ["x"])

        with pytest.raises(ValueError):
            d.y[0] = 5.0

    def test_take_resamples_rows(self) -> None:
        """take() keeps names and repeats rows."""
        d = build_dataset({"y": [1.0, 2.0, 3.0], "x": [0.1, 0.5, 0.2]}, "y", ["x"])

        resample = d.take(np.array([2, 2, 0]))

        np.testing.assert_array_equal(resample.y, [3.0, 3.0, 1.0])
        assert resample.names == d.names


def test_dependent_columns() -> None:
    """Pivoted QR finds the redundant column."""
    x = np.arange(5.0)
    X = np.column_stack([x, 3 * x, np.ones(5)])

    assert len(dependent_columns(X, ["a", "b", "_cons"])) == 1
    assert dependent_columns(np.column_stack([x, np.ones(5)]), ["a", "_cons"]) == []


def test_read_table_missing_tokens(tmp_path: Path) -> None:
    """'NA' and empty cells are missing values."""
    path = tmp_path / "d.csv"
    path.write_text("y,x\n1,NA\n2,\n3,0.5\n", encoding="utf-8")

    frame = read_table(path)

    assert frame["x"].isna().sum() == 2


def test_read_table_missing_file(tmp_path: Path) -> None:
    """A missing file is a data error with exit code 3."""
    with pytest.raises(DataFileError) as excinfo:
        read_table(tmp_path / "absent.csv")

    assert excinfo.value.exit_code == 3
