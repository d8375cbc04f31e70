"""CLI entry point for ldvqr."""

import contextlib
import locale
import sys
from collections.abc import Sequence

import click
import typer
from rich.console import Console

from ldvqr import __version__
from ldvqr.commands import fit, simulate
from ldvqr.commands.fit import build_fit_config, prepare_fit
from ldvqr.commands.simulate import build_simulate_config
from ldvqr.core.exceptions import InvalidSpecError
from ldvqr.schemas.base import CliCommand
from ldvqr.schemas.cli import CliConfig

# Force UTF-8 encoding for all output streams (Windows compatibility)
if sys.platform == "win32":
    with contextlib.suppress(Exception):
        import ctypes

        kernel32 = ctypes.windll.kernel32
        kernel32.SetConsoleCP(65001)
        kernel32.SetConsoleOutputCP(65001)

if hasattr(sys.stdout, "reconfigure"):
    sys.stdout.reconfigure(encoding="utf-8", errors="replace")  # type: ignore[attr-defined]
if hasattr(sys.stderr, "reconfigure"):
    sys.stderr.reconfigure(encoding="utf-8", errors="replace")  # type: ignore[attr-defined]

with contextlib.suppress(locale.Error):
    locale.setlocale(locale.LC_ALL, "C.UTF-8")

# Flags that accept several space-separated values ("--tau 20 50 80").
MULTI_VALUE_FLAGS = frozenset({"--cov", "--tau", "--taus", "--delta", "--dgp", "--test"})
NUMERIC_FLAGS = frozenset({"--tau", "--taus", "--delta"})
DATA_FILE_SUFFIX = ".csv"

app = typer.Typer(
    name="ldvqr",
    help="""
    📊 ldvqr - Quantile regression for limited dependent variables

    Smoothed censored, binary and plain quantile regression with pairs
    bootstrap standard errors, Wald tests across quantiles and
    censored-quantile / probability predictions.

    📋 Quick Start:

      $ ldvqr fit data.csv --dep y_c --cov x --tau 20 50 80 --ll 0 --ul 1
      $ ldvqr fit data.csv --dep y_b --cov x --tau 20 50 80 --test x
      $ ldvqr simulate --dgp censored binary --n 2000 --mc 20

    ⚙️  Environment:

      • LDVQR_THREADS caps bootstrap workers (0 = one per CPU)
      • LDVQR_LOG_DIR sets the log and artifact directory

    📖 For detailed help on each command:

      $ ldvqr <command> --help
    """,
    add_completion=False,
    no_args_is_help=True,
)
console = Console(force_terminal=None, legacy_windows=False)


def version_callback(value: bool) -> None:
    """Print version and exit."""
    if value:
        console.print(f"[bold]ldvqr[/bold] version {__version__}")
        raise typer.Exit()


@app.callback()
def callback(
    version: bool = typer.Option(
        False,
        "--version",
        help="Show version and exit.",
        callback=version_callback,
        is_eager=True,
    ),
) -> None:
    """ldvqr - quantile regression for censored and binary outcomes."""


app.command(name=CliCommand.FIT.value)(fit)
app.command(name=CliCommand.SIMULATE.value)(simulate)


def _is_value(flag: str, token: str) -> bool:
    if flag in NUMERIC_FLAGS:
        try:
            float(token)
        except ValueError:
            return False
        return True
    return not token.startswith("-") and not token.lower().endswith(DATA_FILE_SUFFIX)


def expand_argv(argv: Sequence[str]) -> list[str]:
    """
    Repeat multi-value flags so each value gets its own option.

    "--tau 20 50 80" becomes "--tau 20 --tau 50 --tau 80". Numeric flags stop
    at the first token that is not a number and name flags stop at a .csv
    token, so "fit --cov x data.csv" keeps data.csv as the positional.
    """
    expanded: list[str] = []
    current: str | None = None
    taken = False
    for token in argv:
        if current is not None and token != "--" and _is_value(current, token):
            if taken:
                expanded.append(current)
            expanded.append(token)
            taken = True
            continue
        current = token if token in MULTI_VALUE_FLAGS else None
        taken = False
        expanded.append(token)
    return expanded


def _usage_error_types() -> tuple[type[Exception], ...]:
    """ClickException from the click package and from the click typer is built on."""
    bundled = next(c for c in typer.BadParameter.__mro__ if c.__name__ == "ClickException")
    return tuple({click.ClickException, bundled})


def parse_args(argv: Sequence[str]) -> CliConfig:
    """
    Parse a command line into a validated configuration without running it.

    For 'fit' the data file is read and the model kind resolved: limits
    select a censored model, a 0/1 outcome a binary one, anything else plain.

    Raises:
        InvalidSpecError: On an unknown subcommand, unknown flag or invalid value
        DataError: If the data file is unreadable or a variable is missing
    """
    args = expand_argv(argv)
    names = [command.value for command in CliCommand]
    if not args or args[0] not in names:
        raise InvalidSpecError(
            f"expected a subcommand, got {args[0] if args else 'nothing'}",
            hint=f"use one of: {', '.join(names)}",
        )
    name, rest = args[0], args[1:]
    commands = getattr(typer.main.get_command(app), "commands", {})
    if name not in commands:
        raise InvalidSpecError(f"subcommand '{name}' is not registered")
    try:
        ctx = commands[name].make_context(name, rest)
    except _usage_error_types() as e:
        raise InvalidSpecError(getattr(e, "format_message", e.__str__)()) from e

    if name == CliCommand.FIT:
        config = build_fit_config(ctx.params)
        spec = None if config.replay is not None else prepare_fit(config)[2]
        return CliConfig(command=CliCommand.FIT, fit=config, spec=spec)
    return CliConfig(command=CliCommand.SIMULATE, simulate=build_simulate_config(ctx.params))


def main(argv: Sequence[str] | None = None) -> int:
    """Console-script entry point; returns the process exit code."""
    args = sys.argv[1:] if argv is None else list(argv)
    try:
        app(args=expand_argv(args), prog_name="ldvqr")
    except SystemExit as e:
        if e.code is None:
            return 0
        return e.code if isinstance(e.code, int) else 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
