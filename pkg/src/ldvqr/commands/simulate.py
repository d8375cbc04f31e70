"""Simulate command: Monte Carlo bias of naive versus corrected quantile regression."""

from pathlib import Path
from typing import Annotated, Any

import typer
from pydantic import ValidationError

from ldvqr.commands.base import (
    config_error,
    console,
    handle_command_error,
    save_json_output,
    write_frame,
)
from ldvqr.core.logger import get_logger
from ldvqr.renderers.command_renderers import BenchmarkRenderer
from ldvqr.renderers.terminal_renderer import TerminalRenderer
from ldvqr.schemas.base import DgpName
from ldvqr.schemas.cli import SimulateConfig
from ldvqr.schemas.output import SimulateOutput
from ldvqr.schemas.simulation import BenchmarkConfig
from ldvqr.simulate import benchmark_frame, run_benchmark

logger = get_logger()


def build_simulate_config(params: dict[str, Any]) -> SimulateConfig:
    """
    Map command-line parameters onto a SimulateConfig.

    Raises:
        InvalidSpecError: If the options are invalid
    """
    benchmark: dict[str, Any] = {
        "heter": params.get("heter", True),
        "n": params.get("n", 2000),
        "reps": params.get("mc", 20),
        "seed": params.get("seed", 0),
    }
    if params.get("dgp"):
        benchmark["dgps"] = tuple(params["dgp"])
    if params.get("taus"):
        benchmark["taus"] = tuple(params["taus"])
    try:
        return SimulateConfig(
            benchmark=BenchmarkConfig.model_validate(benchmark),
            csv_out=params.get("csv_out"),
            json_out=params.get("json_out"),
            verbose=params.get("verbose", False),
        )
    except ValidationError as e:
        raise config_error(e) from e


def run_simulate(config: SimulateConfig) -> int:
    """Run the benchmark, print the truth-versus-estimate table and write outputs."""
    terminal = TerminalRenderer(verbose=config.verbose, console=console)
    bench = config.benchmark
    with terminal.render_progress_spinner(
        f"Simulating {len(bench.dgps)} design(s) x {bench.reps} repetitions"
    ):
        rows = run_benchmark(bench)

    output = SimulateOutput(config=bench, rows=rows)
    BenchmarkRenderer(terminal).render(output)
    if config.csv_out is not None:
        write_frame(benchmark_frame(rows), config.csv_out)
    if config.json_out is not None:
        save_json_output(output, config.json_out)
    logger.info("Benchmark finished", rows=len(rows))
    return 0


def simulate(
    dgp: Annotated[
        list[DgpName] | None,
        typer.Option("--dgp", help="Designs: censored, pooled, binary, tobit_contrast"),
    ] = None,
    heter: Annotated[
        bool, typer.Option("--heter/--homo", help="Heteroscedastic censored design")
    ] = True,
    n: Annotated[int, typer.Option("--n", help="Sample size per repetition")] = 2000,
    taus: Annotated[
        list[float] | None, typer.Option("--taus", help="Quantiles as percents or fractions")
    ] = None,
    mc: Annotated[int, typer.Option("--mc", help="Monte Carlo repetitions")] = 20,
    seed: Annotated[int, typer.Option("--seed", help="Master random seed")] = 0,
    csv_out: Annotated[
        Path | None, typer.Option("--csv-out", help="Write the benchmark table as CSV")
    ] = None,
    json_out: Annotated[
        Path | None, typer.Option("--json-out", help="Write a JSON summary")
    ] = None,
    verbose: Annotated[bool, typer.Option("--verbose", "-v", help="Enable verbose output")] = False,
) -> None:
    """🎲 Compare naive and censoring-corrected quantile regression on simulated data.

    \b
    Examples:
      $ ldvqr simulate --dgp censored --heter --n 2000 --taus 20 50 80 --mc 20 --seed 7
      $ ldvqr simulate --dgp binary --n 2000 --taus 20 50 80 --csv-out bias.csv
      $ ldvqr simulate --dgp pooled tobit_contrast --n 4000 --mc 10
    """
    try:
        config = build_simulate_config(
            {
                "dgp": dgp,
                "heter": heter,
                "n": n,
                "taus": taus,
                "mc": mc,
                "seed": seed,
                "csv_out": csv_out,
                "json_out": json_out,
                "verbose": verbose,
            }
        )
        code = run_simulate(config)
    except typer.Exit:
        raise
    except Exception as e:
        handle_command_error(e, verbose)
        return
    if code:
        raise typer.Exit(code=code)
