"""Unit tests for exception classes."""

import pytest

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


@pytest.mark.unit
class TestExceptions:
    """Tests for custom exception classes."""

    def test_ldvqr_error_base(self) -> None:
        """Base error carries message and hint."""
        error = LdvqrError("Something went wrong", hint="Try this fix")

        assert "Something went wrong" in str(error)
        assert "Try this fix" in str(error)
        assert "Hint:" in str(error)
        assert error.exit_code == 1

    def test_ldvqr_error_without_hint(self) -> None:
        """No hint section without a hint."""
        error = LdvqrError("Something went wrong")

        assert str(error) == "Something went wrong"
        assert error.message == "Something went wrong"

    @pytest.mark.parametrize(
        ("error", "code"),
        [
            (InvalidSpecError("bad option"), 2),
            (DegenerateDataError("constant outcome"), 3),
            (DataFileError("data.csv", "file not found"), 3),
            (EmptyDatasetError(4), 3),
            (NumericalError("singular"), 4),
            (BootstrapUnreliableError(15, 50), 4),
            (ConvergenceError("stalled"), 4),
        ],
    )
    def test_exit_codes(self, error: LdvqrError, code: int) -> None:
        """Usage, data and numerical failures map to distinct exit codes."""
        assert error.exit_code == code

    def test_data_file_error(self) -> None:
        """File errors name the path and the expected format."""
        error = DataFileError("missing.csv", "file not found")

        assert error.path == "missing.csv"
        assert "missing.csv" in str(error)
        assert "comma-separated" in str(error)

    def test_unknown_column_lists_available(self) -> None:
        """Unknown columns show a preview of what is available."""
        error = UnknownColumnError("z", [f"c{i}" for i in range(12)])

        assert isinstance(error, DataError)
        assert "Unknown column: z" in str(error)
        assert "c0" in str(error)
        assert "..." in str(error)

    def test_bootstrap_unreliable_counts(self) -> None:
        """The replicate counts are kept and reported."""
        error = BootstrapUnreliableError(12, 50)

        assert (error.failed, error.reps) == (12, 50)
        assert "12 of 50" in str(error)

    def test_convergence_error_diagnostics(self) -> None:
        """Optimizer diagnostics are listed in the hint."""
        error = ConvergenceError("no convergence", diagnostics=["tau=0.2", "tau=0.8"])

        assert error.diagnostics == ["tau=0.2", "tau=0.8"]
        assert "tau=0.8" in str(error)

    def test_output_parse_error(self) -> None:
        """Parse errors keep the raw text."""
        error = OutputParseError("Failed to parse", raw_output="not json")

        assert error.raw_output == "not json"
        assert "--json-out" in str(error)

    def test_schema_validation_error(self) -> None:
        """Schema errors summarize at most three validation problems."""
        errors = [{"loc": ["per_tau", i], "msg": "field required"} for i in range(5)]
        error = SchemaValidationError("Validation failed", validation_errors=errors)

        assert error.validation_errors == errors
        assert "per_tau -> 0: field required" in str(error)
        assert "2 more errors" in str(error)
