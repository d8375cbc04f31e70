"""Base command infrastructure with common patterns and utilities."""

from pathlib import Path

import numpy as np
import pandas as pd
import typer
from pydantic import BaseModel, ValidationError
from rich.console import Console
from rich.markup import escape

from ldvqr.core.exceptions import (
    BootstrapUnreliableError,
    DataError,
    InvalidSpecError,
    LdvqrError,
    NumericalError,
    OutputParseError,
    SchemaValidationError,
)
from ldvqr.core.logger import get_logger
from ldvqr.renderers.json_renderer import JSONRenderer
from ldvqr.schemas.inference import BootstrapRecord
from ldvqr.schemas.prediction import PredictionSet

console = Console(force_terminal=None, legacy_windows=False)
logger = get_logger()


def config_error(error: ValidationError) -> InvalidSpecError:
    """Turn a configuration validation failure into a usage error."""
    first = error.errors()[0]
    location = ".".join(str(part) for part in first.get("loc", ()))
    message = first.get("msg", str(error)).removeprefix("Value error, ")
    return InvalidSpecError(f"{location}: {message}" if location else message)


def save_json_output(data: BaseModel, output_path: Path) -> None:
    """Save a results model as JSON to the given path."""
    try:
        JSONRenderer().render_to_file(data, output_path)
    except OSError as e:
        error_msg = f"Failed to save JSON output to {output_path}: {e}"
        logger.error(error_msg)
        raise LdvqrError(error_msg) from e
    console.print(f"[green]✓[/green] JSON output saved to: {escape(str(output_path))}")
    logger.info(f"Saved JSON output to {output_path}")


def write_frame(frame: pd.DataFrame, output_path: Path) -> None:
    """Write a table as comma-separated UTF-8 with 'NA' for missing values."""
    try:
        output_path.parent.mkdir(parents=True, exist_ok=True)
        frame.to_csv(output_path, index=False, na_rep="NA", encoding="utf-8")
    except OSError as e:
        error_msg = f"Failed to write {output_path}: {e}"
        logger.error(error_msg)
        raise LdvqrError(error_msg) from e
    console.print(f"[green]✓[/green] Table saved to: {escape(str(output_path))}")
    logger.info(f"Saved table to {output_path}", rows=len(frame))


def append_predictions(
    frame: pd.DataFrame, predictions: PredictionSet, row_index: np.ndarray | None
) -> pd.DataFrame:
    """
    Input table with prediction columns appended.

    Rows dropped from the estimation sample get missing predictions.
    """
    out = frame.copy()
    positions = np.arange(len(frame)) if row_index is None else np.asarray(row_index)
    for name, values in predictions.columns.items():
        column = np.full(len(frame), np.nan)
        column[positions] = values
        out[name] = column
    return out


def replicate_frame(record: BootstrapRecord, labels: list[str]) -> pd.DataFrame:
    """Bootstrap replicates as a table, one column per stacked coefficient."""
    return pd.DataFrame(record.matrix, columns=labels)


def handle_command_error(error: Exception, verbose: bool = False) -> None:
    """Log the failure, print a one-line message and exit with the error's code."""
    error_msg = str(error)
    logger.error(f"Command failed: {error_msg}", exc_info=verbose)

    if isinstance(error, InvalidSpecError):
        console.print(f"[red bold]✗ Invalid option:[/red bold] {escape(error_msg)}")
    elif isinstance(error, (OutputParseError, SchemaValidationError)):
        console.print("[red bold]✗ Results file could not be read[/red bold]")
        console.print(escape(error_msg))
    elif isinstance(error, DataError):
        console.print(f"[red bold]✗ Data error:[/red bold] {escape(error_msg)}")
    elif isinstance(error, BootstrapUnreliableError):
        console.print("[red bold]✗ Bootstrap failed[/red bold]")
        console.print(escape(error_msg))
    elif isinstance(error, NumericalError):
        console.print(f"[red bold]✗ Numerical failure:[/red bold] {escape(error_msg)}")
    elif isinstance(error, LdvqrError):
        console.print(f"[red]✗ Error:[/red] {escape(error_msg)}")
    else:
        console.print(f"[red]✗ Unexpected error:[/red] {escape(error_msg)}")
        if verbose:
            console.print_exception()
        else:
            console.print("\n[dim]Run with --verbose for full error details[/dim]")

    code = error.exit_code if isinstance(error, LdvqrError) else 1
    raise typer.Exit(code=code)
