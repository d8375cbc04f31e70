"""Specialized renderers for specific command outputs."""

import math

from rich.markup import escape
from rich.table import Table

from ldvqr.renderers.terminal_renderer import TerminalRenderer, format_number
from ldvqr.schemas.output import FitOutput, SimulateOutput


class FitRenderer:
    """Renders estimation results from the JSON output document."""

    def __init__(self, terminal: TerminalRenderer) -> None:
        self.terminal = terminal

    def render(self, result: FitOutput) -> None:
        """Render the header, coefficient table, tests and diagnostics."""
        diag = result.diagnostics
        spec = result.spec
        facts: dict[str, str] = {
            "Number of obs": f"{diag.n:,}",
            "Replications": str(diag.reps_completed),
        }
        if math.isfinite(spec.c_L):
            facts["Lower limit"] = format_number(spec.c_L)
        if math.isfinite(spec.c_H):
            facts["Upper limit"] = format_number(spec.c_H)
        facts["Bandwidth"] = format_number(result.bandwidth)
        self.terminal.render_header(diag.title, facts)
        self.terminal.render_coefficient_table(diag.depvar, result.per_tau)

        for test in result.tests:
            self.terminal.render_test(test)

        if diag.dropped_rows:
            self.terminal.print_info(f"{diag.dropped_rows} rows dropped for missing values")
        if diag.reps_failed:
            self.terminal.print_warning(f"{diag.reps_failed} bootstrap replicates failed")
        if diag.crossing_fraction:
            self.terminal.print_warning(
                f"Quantile predictions cross on {diag.crossing_fraction:.1%} of rows"
            )
        if self.terminal.verbose:
            self.terminal.print_info(
                f"sigma_hat = {format_number(result.sigma_hat)} ({diag.sigma_source})"
            )
        for message in diag.messages:
            self.terminal.print_warning(escape(message))
        if not diag.converged:
            self.terminal.print_error("Some quantiles did not converge")


class BenchmarkRenderer:
    """Renders the Monte Carlo truth-versus-estimate table."""

    def __init__(self, terminal: TerminalRenderer) -> None:
        self.terminal = terminal

    def render(self, result: SimulateOutput) -> None:
        """Render one row per design, quantile, estimator and coefficient."""
        config = result.config
        self.terminal.render_summary_table(
            {
                "designs": ", ".join(str(d) for d in config.dgps),
                "n": f"{config.n:,}",
                "repetitions": config.reps,
                "seed": config.seed,
            },
            "Monte Carlo benchmark",
        )
        table = Table(show_header=True, header_style="bold magenta")
        for label in ("DGP", "tau", "Estimator", "Coef", "Truth", "Mean", "Bias", "MC s.e."):
            left = label in ("DGP", "Estimator", "Coef")
            table.add_column(label, justify="left" if left else "right")
        for row in result.rows:
            table.add_row(
                str(row.dgp),
                f"{row.tau:g}" if row.tau is not None else "-",
                str(row.estimator),
                escape(row.coef),
                format_number(row.truth, 6),
                format_number(row.mean_estimate, 6),
                format_number(row.bias, 4),
                format_number(row.mc_se, 4),
            )
        self.terminal.console.print(table)
        self.terminal.print_success("Benchmark complete")
