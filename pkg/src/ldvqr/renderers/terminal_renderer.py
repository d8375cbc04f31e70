"""Terminal output renderer using Rich library."""

import math
from typing import Any

from rich.console import Console
from rich.markup import escape
from rich.progress import Progress, SpinnerColumn, TextColumn
from rich.table import Table

from ldvqr.schemas.inference import WaldResult
from ldvqr.schemas.output import TauBlock

# Table precision of statistical package logs
SIGNIFICANT_DIGITS = 7


def format_number(value: float, digits: int = SIGNIFICANT_DIGITS) -> str:
    """Format a table number with `digits` significant digits; missing values print as '.'."""
    if value is None or math.isnan(value):
        return "."
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return f"{value:.{digits}g}"


class TerminalRenderer:
    """Rich components for the fit and benchmark displays."""

    def __init__(self, verbose: bool = False, console: Console | None = None) -> None:
        """
        Initialize terminal renderer.

        Args:
            verbose: Enable verbose output
            console: Rich console instance (creates new if None)
        """
        self.verbose = verbose
        self.console = console or Console(force_terminal=None, legacy_windows=False)

    # === Component Renderers ===

    def render_header(self, title: str, facts: dict[str, Any]) -> None:
        """Model title on the left, 'Label = value' facts on the right."""
        width = max((len(k) for k in facts), default=0)
        grid = Table.grid(expand=True)
        grid.add_column()
        grid.add_column(justify="right")
        rows = [f"{k:<{width}} = {v:>10}" for k, v in facts.items()] or [""]
        for i, line in enumerate(rows):
            grid.add_row(f"[bold]{title}[/bold]" if i == 0 else "", line)
        self.console.print()
        self.console.print(grid)

    def render_coefficient_table(self, depvar: str, blocks: list[TauBlock]) -> None:
        """
        Render stacked per-quantile coefficient rows.

        Columns follow normal-based bootstrap output: Coef., Std. Err., z,
        P>|z| and the 95% confidence interval.
        """
        table = Table(show_header=True, header_style="bold", show_lines=False)
        table.add_column(escape(depvar), style="cyan")
        for label in ("Coef.", "Std. Err.", "z", "P>|z|", "[95% Conf.", "Interval]"):
            table.add_column(escape(label), justify="right")

        for block in blocks:
            table.add_row(f"[bold]{block.label}[/bold]", "", "", "", "", "", "")
            for row in block.coef:
                table.add_row(
                    f"  {escape(row.name)}",
                    format_number(row.est),
                    format_number(row.se),
                    format_number(row.z, 4),
                    "." if math.isnan(row.p) else f"{row.p:.3f}",
                    format_number(row.ci_lo),
                    format_number(row.ci_hi),
                )
        self.console.print(table)

    def render_test(self, result: WaldResult) -> None:
        """Render a Wald test with its constraints."""
        self.console.print(f"\n[bold]{result.name.capitalize()} test[/bold]")
        for i, constraint in enumerate(result.constraints, 1):
            self.console.print(f" ({i:>2})  {escape(constraint)}")
        self.console.print(
            f"\n{'chi2(' + str(result.df).rjust(3) + ')':>14} = {result.statistic:>8.2f}"
        )
        self.console.print(f"{'Prob > chi2':>14} = {result.p_value:>8.4f}")
        for note in result.warnings:
            self.print_warning(escape(note))

    def render_summary_table(self, data: dict[str, Any], title: str = "Summary") -> None:
        """
        Render a simple key-value summary table.

        Args:
            data: Dictionary of key-value pairs
            title: Table title
        """
        table = Table(title=title, show_header=False, box=None)
        table.add_column("Key", style="cyan")
        table.add_column("Value", style="white")

        for key, value in data.items():
            table.add_row(key.replace("_", " ").title(), str(value))

        self.console.print(table)

    def render_progress_spinner(self, message: str = "Processing...") -> Progress:
        """Create a spinner for use as a context manager."""
        progress = Progress(
            SpinnerColumn(),
            TextColumn("[bold blue]{task.description}[/bold blue]"),
            console=self.console,
            transient=True,
        )
        progress.add_task(message, total=None)
        return progress

    def print_success(self, message: str) -> None:
        """Print a success message."""
        self.console.print(f"[green]✓[/green] {message}")

    def print_error(self, message: str) -> None:
        """Print an error message."""
        self.console.print(f"[red]✗[/red] {message}")

    def print_warning(self, message: str) -> None:
        """Print a warning message."""
        self.console.print(f"[yellow]⚠[/yellow] {message}")

    def print_info(self, message: str) -> None:
        """Print an info message."""
        self.console.print(f"[blue]ℹ[/blue] {message}")
