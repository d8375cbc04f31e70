"""Unit tests for reading and rendering results."""

import io
import json
import math
from pathlib import Path

import pytest
from rich.console import Console

from ldvqr.core.exceptions import DataFileError, OutputParseError, SchemaValidationError
from ldvqr.core.results import ResultsReader
from ldvqr.renderers.json_renderer import JSONRenderer
from ldvqr.renderers.terminal_renderer import TerminalRenderer
from ldvqr.schemas.output import FitOutput
from ldvqr.schemas.simulation import BenchmarkConfig


@pytest.mark.unit
class TestResultsReader:
    """Tests for ResultsReader."""

    def test_parse_json_object(self) -> None:
        """Plain JSON objects parse."""
        reader = ResultsReader()
        data = {"key": "value", "number": 42}

        assert reader.parse_json(json.dumps(data)) == data

    def test_parse_json_accepts_infinity(self) -> None:
        """Infinite censoring limits survive a round trip."""
        reader = ResultsReader()

        assert reader.parse_json('{"c_H": Infinity}') == {"c_H": float("inf")}

    def test_parse_json_invalid(self) -> None:
        """Malformed text raises OutputParseError."""
        with pytest.raises(OutputParseError, match="Failed to parse"):
            ResultsReader().parse_json("{not json")

    def test_parse_json_not_object(self) -> None:
        """A JSON array is not a results document."""
        with pytest.raises(OutputParseError, match="JSON object"):
            ResultsReader().parse_json("[1, 2]")

    def test_validate_schema_failure(self) -> None:
        """Missing fields raise SchemaValidationError."""
        with pytest.raises(SchemaValidationError, match="FitOutput"):
            ResultsReader().validate_schema({"spec": {}}, FitOutput)

    def test_validate_other_schema(self) -> None:
        """Any Pydantic model can be the target."""
        config = ResultsReader().parse_and_validate('{"n": 500, "reps": 3}', BenchmarkConfig)

        assert config.n == 500

    def test_read_round_trip(self, tmp_path: Path, fit_factory) -> None:
        """A written fit reads back with every printed number intact."""
        fit = fit_factory([(0.5, 0.1), (0.6, 0.2)], (0.2, 0.8))
        output = FitOutput.from_fit(fit)
        path = tmp_path / "results.json"
        JSONRenderer().render_to_file(output, path)

        loaded = ResultsReader().read(path)

        assert loaded == output
        assert loaded.per_tau[0].coef[0].se == output.per_tau[0].coef[0].se

    def test_read_missing_file(self, tmp_path: Path) -> None:
        """A missing file is a data error."""
        with pytest.raises(DataFileError, match="file not found"):
            ResultsReader().read(tmp_path / "nope.json")


@pytest.mark.unit
class TestRenderers:
    """JSON serialization and the terminal components."""

    def test_json_keeps_non_finite_values(self) -> None:
        """Infinite limits and missing statistics survive a JSON round trip."""
        text = JSONRenderer(indent=0).render({"c_H": math.inf, "se": math.nan})

        loaded = json.loads(text)

        assert loaded["c_H"] == math.inf
        assert math.isnan(loaded["se"])

    def test_terminal_header_lists_facts(self) -> None:
        """The header prints the title and one 'Label = value' line per fact."""
        buffer = io.StringIO()
        terminal = TerminalRenderer(console=Console(file=buffer, width=100))

        terminal.render_header("Censored quantile regression", {"Obs": 300, "Reps": 50})

        text = buffer.getvalue()
        assert "Censored quantile regression" in text
        assert "Obs  =" in text
        assert "Reps =" in text
