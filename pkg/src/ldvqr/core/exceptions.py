"""Custom exceptions for ldvqr."""

from typing import Any


class LdvqrError(Exception):
    """Base exception for all ldvqr errors."""

    exit_code: int = 1

    def __init__(self, message: str, hint: str | None = None) -> None:
        """
        Initialize error with message and optional hint.

        Args:
            message: Error message
            hint: Optional hint for resolving the error
        """
        self.message = message
        self.hint = hint
        full_message = message
        if hint:
            full_message = f"{message}\n\nHint: {hint}"
        super().__init__(full_message)


class InvalidSpecError(LdvqrError):
    """Raised when a model specification or command-line option is invalid."""

    exit_code = 2


class DataError(LdvqrError):
    """Raised when input data cannot support the requested estimation."""

    exit_code = 3


class DataFileError(DataError):
    """Raised when an input file cannot be read or parsed."""

    def __init__(self, path: str, reason: str) -> None:
        self.path = path
        message = f"Cannot read data file {path}: {reason}"
        hint = "Input must be a comma-separated file with a header row (UTF-8)"
        super().__init__(message, hint)


class UnknownColumnError(DataError):
    """Raised when a requested variable is not present in the data."""

    def __init__(self, name: str, available: list[str]) -> None:
        self.name = name
        preview = ", ".join(available[:10])
        if len(available) > 10:
            preview += ", ..."
        super().__init__(f"Unknown column: {name}", hint=f"Available columns: {preview}")


class EmptyDatasetError(DataError):
    """Raised when no observations remain after dropping missing values."""

    def __init__(self, dropped: int) -> None:
        self.dropped = dropped
        message = f"No observations left after dropping {dropped} rows with missing values"
        super().__init__(message, hint="Check the dependent variable and covariate columns")


class DegenerateDataError(DataError):
    """Raised when the outcome carries no information for the requested model."""


class NumericalError(LdvqrError):
    """Raised when an estimation step fails numerically."""

    exit_code = 4


class ConvergenceError(NumericalError):
    """Raised when an optimizer cannot produce a usable estimate."""

    def __init__(self, message: str, diagnostics: list[str] | None = None) -> None:
        self.diagnostics = diagnostics or []
        hint = None
        if self.diagnostics:
            hint = "Optimizer diagnostics:\n" + "\n".join(f"  - {d}" for d in self.diagnostics[:5])
        super().__init__(message, hint)


class BootstrapUnreliableError(NumericalError):
    """Raised when too many bootstrap replicates fail."""

    def __init__(self, failed: int, reps: int) -> None:
        self.failed = failed
        self.reps = reps
        message = f"bootstrap unreliable: {failed} of {reps} replicates failed"
        hint = (
            "Failed replicates usually mean resamples without both outcome classes or "
            "without uncensored observations. Try a larger sample or fewer quantiles."
        )
        super().__init__(message, hint)


class OutputParseError(DataError):
    """Raised when a results file cannot be parsed as valid JSON."""

    def __init__(self, message: str, raw_output: str) -> None:
        self.raw_output = raw_output
        hint = "The results file is not valid JSON. Re-run 'ldvqr fit' with --json-out."
        super().__init__(message, hint)


class SchemaValidationError(DataError):
    """Raised when a results file doesn't match the expected Pydantic schema."""

    def __init__(self, message: str, validation_errors: list[Any]) -> None:
        self.validation_errors = validation_errors
        error_summary = self._format_validation_errors(validation_errors)
        hint = f"The results file doesn't match the expected format:\n{error_summary}"
        super().__init__(message, hint)

    @staticmethod
    def _format_validation_errors(errors: list[Any]) -> str:
        """Format validation errors for display."""
        formatted = []
        for err in errors[:3]:  # Show first 3 errors
            if isinstance(err, dict):
                loc = " -> ".join(str(x) for x in err.get("loc", []))
                msg = err.get("msg", "Unknown error")
                formatted.append(f"  • {loc}: {msg}")
            else:
                formatted.append(f"  • {err}")

        if len(errors) > 3:
            formatted.append(f"  ... and {len(errors) - 3} more errors")

        return "\n".join(formatted)


class RankDeficiencyWarning(UserWarning):
    """Emitted when the design matrix has linearly dependent columns."""


class WaldRankWarning(UserWarning):
    """Emitted when a Wald test falls back to a pseudo-inverse."""
