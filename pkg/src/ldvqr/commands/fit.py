"""Fit command: quantile regression for censored, binary or plain outcomes."""

from pathlib import Path
from typing import Annotated, Any

import pandas as pd
import typer
from pydantic import ValidationError

from ldvqr.commands.base import (
    append_predictions,
    config_error,
    console,
    handle_command_error,
    replicate_frame,
    save_json_output,
    write_frame,
)
from ldvqr.core.data import Dataset, build_dataset, detect_model_kind, read_table
from ldvqr.core.exceptions import InvalidSpecError
from ldvqr.core.logger import get_logger
from ldvqr.core.results import ResultsReader
from ldvqr.estimators import fit_with_record
from ldvqr.inference import homogeneity_test, symmetry_test
from ldvqr.predict import build_predictions, crossing_fraction
from ldvqr.renderers.command_renderers import FitRenderer
from ldvqr.renderers.terminal_renderer import TerminalRenderer
from ldvqr.schemas.base import ModelKind, SymmetryMode
from ldvqr.schemas.cli import FitConfig
from ldvqr.schemas.inference import WaldResult
from ldvqr.schemas.model import FitResult, ModelSpec, tau_label
from ldvqr.schemas.output import FitOutput

EXIT_NOT_CONVERGED = 4

logger = get_logger()


def build_fit_config(params: dict[str, Any]) -> FitConfig:
    """
    Map command-line parameters onto a FitConfig.

    Raises:
        InvalidSpecError: If the options are inconsistent
    """
    try:
        return FitConfig(
            input=params.get("data"),
            depvar=params.get("dep"),
            covars=tuple(params.get("cov") or ()),
            taus=tuple(params.get("tau") or ()),
            ll=params.get("ll"),
            ul=params.get("ul"),
            reps=params.get("reps", 50),
            bwidth=params.get("bwidth"),
            pbwidth=params.get("pbwidth"),
            seed=params.get("seed", 0),
            qcen=params.get("qcen"),
            pcen=params.get("pcen"),
            p1=params.get("p1"),
            json_out=params.get("json_out"),
            csv_out=params.get("csv_out"),
            homogeneity=tuple(params.get("test") or ()),
            symmetry=params.get("symmetry", False),
            deltas=tuple(params.get("delta") or ()),
            symmetry_mode=params.get("symmetry_mode", SymmetryMode.PER_DELTA),
            replay=params.get("replay"),
            save_replicates=params.get("save_replicates"),
            verbose=params.get("verbose", False),
        )
    except ValidationError as e:
        raise config_error(e) from e


def prepare_fit(config: FitConfig) -> tuple[pd.DataFrame, Dataset, ModelSpec]:
    """
    Read the data, build the estimation sample and resolve the model kind.

    Supplied limits select a censored model; otherwise a 0/1 outcome is
    binary and anything else is a plain smoothed quantile regression.
    """
    if config.input is None or config.depvar is None:
        raise InvalidSpecError("a data file and --dep are required")
    frame = read_table(config.input)
    d = build_dataset(frame, config.depvar, config.covars)
    kind = detect_model_kind(d.y, config.ll, config.ul)
    return frame, d, config.model_spec(kind)


def run_tests(fit: FitResult, config: FitConfig) -> list[WaldResult]:
    """Run the requested homogeneity and symmetry tests."""
    tests = [homogeneity_test(fit, name) for name in config.homogeneity]
    if config.symmetry:
        tests.append(symmetry_test(fit, config.deltas, config.symmetry_mode))
    return tests


def replay_results(config: FitConfig, terminal: TerminalRenderer) -> int:
    """Re-print a saved results file without refitting."""
    if config.replay is None:
        raise InvalidSpecError("--replay needs a results file")
    output = ResultsReader().read(config.replay)
    FitRenderer(terminal).render(output)
    return 0 if output.diagnostics.converged else EXIT_NOT_CONVERGED


def run_fit(config: FitConfig) -> int:
    """
    Fit, bootstrap, test, predict and write outputs.

    Returns:
        0 when every quantile converged, 4 otherwise (outputs are still written)
    """
    terminal = TerminalRenderer(verbose=config.verbose, console=console)
    if config.replay is not None:
        return replay_results(config, terminal)

    frame, d, spec = prepare_fit(config)
    logger.info("Fit requested", kind=str(spec.kind), n=d.n, taus=list(spec.taus))
    if config.verbose:
        terminal.print_info(f"{spec.kind.title}: {d.n} observations, {spec.reps} replications")

    with terminal.render_progress_spinner(f"Fitting and bootstrapping ({spec.reps} replications)"):
        fit, record = fit_with_record(d, spec)

    tests = run_tests(fit, config)

    predictions = None
    if config.qcen or config.pcen or config.p1:
        predictions = build_predictions(
            fit, d.X, qcen=config.qcen, pcen=config.pcen, p1=config.p1, pbw=config.pbwidth
        )
        crossing = predictions.crossing_fraction
    elif spec.kind is not ModelKind.BINARY:
        crossing = crossing_fraction(fit, d.X)
    else:
        crossing = None

    output = FitOutput.from_fit(
        fit, tests=tests, dropped_rows=d.dropped, crossing_fraction=crossing
    )
    FitRenderer(terminal).render(output)

    if config.json_out is not None:
        save_json_output(output, config.json_out)
    if predictions is not None and config.csv_out is not None:
        write_frame(append_predictions(frame, predictions, d.row_index), config.csv_out)
    if config.save_replicates is not None:
        labels = [f"{tau_label(tau)}:{name}" for tau in fit.taus for name in fit.names]
        write_frame(replicate_frame(record, labels), config.save_replicates)

    return 0 if fit.converged else EXIT_NOT_CONVERGED


def fit(
    data: Annotated[
        Path | None, typer.Argument(help="CSV file with a header row ('NA' or empty = missing)")
    ] = None,
    dep: Annotated[str | None, typer.Option("--dep", help="Dependent variable")] = None,
    cov: Annotated[
        list[str] | None, typer.Option("--cov", help="Covariates (several allowed)")
    ] = None,
    tau: Annotated[
        list[float] | None,
        typer.Option("--tau", help="Quantiles as percents (20 50 80) or fractions; default 50"),
    ] = None,
    ll: Annotated[float | None, typer.Option("--ll", help="Lower censoring limit")] = None,
    ul: Annotated[float | None, typer.Option("--ul", help="Upper censoring limit")] = None,
    reps: Annotated[int, typer.Option("--reps", help="Bootstrap replications")] = 50,
    bwidth: Annotated[
        float | None, typer.Option("--bwidth", help="Bandwidth override for the objective")
    ] = None,
    pbwidth: Annotated[
        float | None, typer.Option("--pbwidth", help="Bandwidth for smoothed probabilities")
    ] = None,
    seed: Annotated[int, typer.Option("--seed", help="Master random seed")] = 0,
    qcen: Annotated[
        str | None, typer.Option("--qcen", help="Prefix for censored quantile predictions")
    ] = None,
    pcen: Annotated[
        str | None, typer.Option("--pcen", help="Prefix for censoring probabilities")
    ] = None,
    p1: Annotated[str | None, typer.Option("--p1", help="Prefix for P(y=1|x)")] = None,
    json_out: Annotated[
        Path | None, typer.Option("--json-out", help="Write results as JSON")
    ] = None,
    csv_out: Annotated[
        Path | None, typer.Option("--csv-out", help="Write the data with prediction columns")
    ] = None,
    test: Annotated[
        list[str] | None,
        typer.Option("--test", help="Homogeneity test across quantiles for a covariate or ALL"),
    ] = None,
    symmetry: Annotated[
        bool, typer.Option("--symmetry", help="Test symmetry around the median")
    ] = False,
    delta: Annotated[
        list[float] | None,
        typer.Option("--delta", help="Symmetry distances from 0.5 (default: every fitted pair)"),
    ] = None,
    symmetry_mode: Annotated[
        SymmetryMode, typer.Option("--symmetry-mode", help="per_delta or averaged")
    ] = SymmetryMode.PER_DELTA,
    replay: Annotated[
        Path | None,
        typer.Option("--replay", help="Re-print a JSON results file instead of fitting"),
    ] = None,
    save_replicates: Annotated[
        Path | None, typer.Option("--save-replicates", help="Write bootstrap replicates as CSV")
    ] = None,
    verbose: Annotated[bool, typer.Option("--verbose", "-v", help="Enable verbose output")] = False,
) -> None:
    """📈 Fit censored, binary or plain quantile regressions with bootstrap inference.

    The model follows the outcome: --ll/--ul select censored quantile
    regression, a 0/1 outcome selects binary quantile regression, anything
    else a smoothed quantile regression.

    \b
    Examples:
      $ ldvqr fit data.csv --dep y_c --cov x --tau 20 50 80 --ll 0 --ul 1 --reps 100
      $ ldvqr fit data.csv --dep y_b --cov x --tau 10 25 50 75 90 \\
            --symmetry --symmetry-mode averaged
      $ ldvqr fit data.csv --dep y_c --cov x --tau 10 20 30 40 50 60 70 80 90 --ll 0 --ul 1 \\
            --qcen myqcen --pcen mypcen --csv-out predictions.csv
      $ ldvqr fit --replay results.json
    """
    try:
        config = build_fit_config(
            {
                "data": data,
                "dep": dep,
                "cov": cov,
                "tau": tau,
                "ll": ll,
                "ul": ul,
                "reps": reps,
                "bwidth": bwidth,
                "pbwidth": pbwidth,
                "seed": seed,
                "qcen": qcen,
                "pcen": pcen,
                "p1": p1,
                "json_out": json_out,
                "csv_out": csv_out,
                "test": test,
                "symmetry": symmetry,
                "delta": delta,
                "symmetry_mode": symmetry_mode,
                "replay": replay,
                "save_replicates": save_replicates,
                "verbose": verbose,
            }
        )
        code = run_fit(config)
    except typer.Exit:
        raise
    except Exception as e:
        handle_command_error(e, verbose)
        return
    if code:
        raise typer.Exit(code=code)
