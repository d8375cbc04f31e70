"""Reading and validating JSON results files."""

import json
from pathlib import Path
from typing import Any, TypeVar

from pydantic import BaseModel, ValidationError

from ldvqr.core.exceptions import DataFileError, OutputParseError, SchemaValidationError
from ldvqr.core.logger import get_logger
from ldvqr.schemas.output import FitOutput

T = TypeVar("T", bound=BaseModel)


class ResultsReader:
    """Loads results written by 'ldvqr fit' and validates them against the output schema."""

    def __init__(self) -> None:
        self.logger = get_logger()

    def parse_json(self, raw: str) -> dict[str, Any]:
        """
        Parse a results document.

        Infinity and NaN tokens are accepted, since censoring limits may be infinite.

        Raises:
            OutputParseError: If the text is not a JSON object
        """
        try:
            parsed = json.loads(raw)
        except json.JSONDecodeError as e:
            self.logger.error(f"Failed to parse JSON: {e}")
            raise OutputParseError(f"Failed to parse results as JSON: {e}", raw_output=raw) from e
        if not isinstance(parsed, dict):
            raise OutputParseError("Results must be a JSON object", raw_output=raw)
        self.logger.debug("Successfully parsed results JSON")
        return parsed

    def validate_schema(self, data: dict[str, Any], schema: type[T]) -> T:
        """
        Validate parsed data against a Pydantic schema.

        Raises:
            SchemaValidationError: If data doesn't match schema
        """
        try:
            validated = schema.model_validate(data)
        except ValidationError as e:
            self.logger.error(f"Schema validation failed: {e}")
            raise SchemaValidationError(
                f"Results don't match expected schema {schema.__name__}",
                validation_errors=e.errors(),
            ) from e
        self.logger.debug(f"Successfully validated against {schema.__name__}")
        return validated

    def parse_and_validate(
        self, raw: str, schema: type[T] = FitOutput  # type: ignore[assignment]
    ) -> T:
        """Parse and validate in one step."""
        return self.validate_schema(self.parse_json(raw), schema)

    def read(self, path: str | Path) -> FitOutput:
        """
        Load a fit results file.

        Raises:
            DataFileError: If the file cannot be read
            OutputParseError: If parsing fails
            SchemaValidationError: If validation fails
        """
        path = Path(path)
        try:
            raw = path.read_text(encoding="utf-8")
        except FileNotFoundError as e:
            raise DataFileError(str(path), "file not found") from e
        except (OSError, UnicodeDecodeError) as e:
            raise DataFileError(str(path), str(e)) from e
        return self.parse_and_validate(raw, FitOutput)
