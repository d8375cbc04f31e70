"""Simulation designs, analytic truth oracles and the naive-vs-corrected benchmark.

All designs draw from numpy's PCG64 generator. Gaussian draws use numpy's
ziggurat sampler; chi-square(1) draws are squared standard normals.
"""

import math
from collections.abc import Callable
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pandas as pd
from numpy.typing import ArrayLike
from scipy.special import ndtr
from scipy.stats import norm

from ldvqr.core.data import INTERCEPT, build_dataset
from ldvqr.core.exceptions import InvalidSpecError, LdvqrError
from ldvqr.core.logger import get_logger
from ldvqr.core.settings import get_settings
from ldvqr.estimators import fit_point, normalize_coefficients, tobit_fit
from ldvqr.schemas.base import DgpName, EstimatorName, ModelKind
from ldvqr.schemas.model import ModelSpec
from ldvqr.schemas.simulation import BenchmarkConfig, BenchmarkRow, DgpOutput

BINARY_INTERCEPT = -2.5
TOBIT_CONTRAST_INTERCEPT = -1.0 / 3.0
COVARIATE = "x"

logger = get_logger()


def _check_n(n: int) -> None:
    if n < 1:
        raise InvalidSpecError(f"sample size must be at least 1, got {n}")


# === Designs ===


def dgp_censored(n: int, heter: bool, seed: int = 0) -> DgpOutput:
    """
    x ~ U(0, 1); y = x + N(0, 1) / 3, or x + (1 + x) N(0, 1) / 3 when heter;
    observed y_c = min(max(y, 0), 1).
    """
    _check_n(n)
    rng = np.random.default_rng(seed)
    x = rng.uniform(0.0, 1.0, size=n)
    noise = rng.standard_normal(n) / 3.0
    y = x + ((1.0 + x) * noise if heter else noise)
    return DgpOutput(
        dgp=DgpName.CENSORED,
        seed=seed,
        x=x,
        y_latent=y,
        y=np.clip(y, 0.0, 1.0),
        c_L=0.0,
        c_H=1.0,
        heter=heter,
    )


def dgp_pooled(n: int, seed: int = 0) -> DgpOutput:
    """First half homoscedastic, second half heteroscedastic, censored at 0 and 1."""
    _check_n(n)
    rng = np.random.default_rng(seed)
    x = rng.uniform(0.0, 1.0, size=n)
    noise = rng.standard_normal(n) / 3.0
    scale = np.where(np.arange(n) < n // 2, 1.0, 1.0 + x)
    y = x + scale * noise
    return DgpOutput(
        dgp=DgpName.POOLED,
        seed=seed,
        x=x,
        y_latent=y,
        y=np.clip(y, 0.0, 1.0),
        c_L=0.0,
        c_H=1.0,
    )


def dgp_binary(n: int, seed: int = 0) -> DgpOutput:
    """x ~ U(0, 10); y = -2.5 + x + x (chi2_1 - 1) / sqrt(2); y_b = I{y > 0}."""
    _check_n(n)
    rng = np.random.default_rng(seed)
    x = rng.uniform(0.0, 10.0, size=n)
    chi = rng.standard_normal(n) ** 2
    y = BINARY_INTERCEPT + x + x * (chi - 1.0) / math.sqrt(2.0)
    return DgpOutput(dgp=DgpName.BINARY, seed=seed, x=x, y_latent=y, y=(y > 0).astype(float))


def dgp_tobit_contrast(n: int, seed: int = 0) -> DgpOutput:
    """x ~ U(0, 1); y = -1/3 + x + x N(0, 1) / 3 censored below at 0."""
    _check_n(n)
    rng = np.random.default_rng(seed)
    x = rng.uniform(0.0, 1.0, size=n)
    y = TOBIT_CONTRAST_INTERCEPT + x + x * rng.standard_normal(n) / 3.0
    return DgpOutput(
        dgp=DgpName.TOBIT_CONTRAST,
        seed=seed,
        x=x,
        y_latent=y,
        y=np.maximum(y, 0.0),
        c_L=0.0,
        heter=True,
    )


# === Oracles ===


def _z(tau: float) -> float:
    if not 0.0 < tau < 1.0:
        raise InvalidSpecError(f"quantile index must lie in (0, 1), got {tau}")
    return float(norm.ppf(tau))


def true_coef_censored(tau: float, heter: bool) -> tuple[float, float]:
    """(intercept, slope) of the latent conditional quantile line."""
    z = _z(tau)
    return z / 3.0, (1.0 + z / 3.0) if heter else 1.0


def true_coef_binary(tau: float) -> tuple[float, float]:
    """Unit-norm (slope, intercept) of the binary design's latent quantile line."""
    q = _z((1.0 + tau) / 2.0) ** 2
    slope = 1.0 + (q - 1.0) / math.sqrt(2.0)
    length = math.hypot(slope, BINARY_INTERCEPT)
    return slope / length, BINARY_INTERCEPT / length


def true_coef_tobit_contrast(tau: float) -> tuple[float, float]:
    """(intercept, slope) of the Tobit-contrast latent quantile line."""
    return TOBIT_CONTRAST_INTERCEPT, 1.0 + _z(tau) / 3.0


def true_prob_one(x: ArrayLike) -> np.ndarray | float:
    """
    P(y = 1 | x) in the binary design: P(chi2_1 > 1 + sqrt(2) (2.5 - x) / x).

    Exactly 0 for x <= 0 and 1 where the threshold is not positive.
    """
    x = np.asarray(x, dtype=float)
    positive = x > 0
    safe = np.where(positive, x, 1.0)
    threshold = 1.0 + math.sqrt(2.0) * (-BINARY_INTERCEPT - safe) / safe
    survival = 2.0 * norm.sf(np.sqrt(np.maximum(threshold, 0.0)))
    out = np.where(positive, np.where(threshold <= 0, 1.0, survival), 0.0)
    return out if out.ndim else float(out)


# === Benchmark ===

# Covariate values where the binary design's Probit probability is scored
PROBABILITY_POINTS = (2.5, 5.0, 7.5)

Estimates = dict[tuple[float | None, EstimatorName], dict[str, float]]


def probability_label(x: float) -> str:
    """Coefficient label of a P(y = 1 | x) benchmark row."""
    return f"P(y=1|x={x:g})"


def _simulate(dgp: DgpName, n: int, heter: bool, seed: int) -> DgpOutput:
    if dgp is DgpName.CENSORED:
        return dgp_censored(n, heter, seed)
    if dgp is DgpName.POOLED:
        return dgp_pooled(n, seed)
    if dgp is DgpName.BINARY:
        return dgp_binary(n, seed)
    return dgp_tobit_contrast(n, seed)


def _truth(dgp: DgpName, tau: float | None, heter: bool) -> dict[str, float]:
    if tau is None:
        return {probability_label(x): float(true_prob_one(x)) for x in PROBABILITY_POINTS}
    if dgp is DgpName.CENSORED:
        intercept, slope = true_coef_censored(tau, heter)
    elif dgp is DgpName.BINARY:
        slope, intercept = true_coef_binary(tau)
    elif dgp is DgpName.TOBIT_CONTRAST:
        intercept, slope = true_coef_tobit_contrast(tau)
    else:
        intercept = slope = math.nan
    return {COVARIATE: slope, INTERCEPT: intercept}


def _named(beta: np.ndarray) -> dict[str, float]:
    return dict(zip((COVARIATE, INTERCEPT), beta.tolist(), strict=True))


def _one_repetition(dgp: DgpName, config: BenchmarkConfig, seed: int) -> Estimates:
    sample = _simulate(dgp, config.n, config.heter, seed)
    d = build_dataset(sample.columns(), "y_obs", [COVARIATE])
    out: Estimates = {}

    naive = fit_point(d, ModelSpec(kind=ModelKind.PLAIN, taus=config.taus, seed=seed))
    corrected_kind = ModelKind.BINARY if dgp is DgpName.BINARY else ModelKind.CENSORED
    corrected = fit_point(
        d,
        ModelSpec(
            kind=corrected_kind, c_L=sample.c_L, c_H=sample.c_H, taus=config.taus, seed=seed
        ),
    )
    for coef in naive.coefs:
        beta = coef.array
        if dgp is DgpName.BINARY:
            beta = normalize_coefficients(beta)[0] if np.any(beta) else np.full(beta.size, np.nan)
        out[(coef.tau, EstimatorName.NAIVE)] = _named(beta)
    for coef in corrected.coefs:
        out[(coef.tau, EstimatorName.CORRECTED)] = _named(coef.array)

    if dgp is DgpName.BINARY and corrected.probit_beta is not None:
        design = np.column_stack([PROBABILITY_POINTS, np.ones(len(PROBABILITY_POINTS))])
        probit = ndtr(design @ np.asarray(corrected.probit_beta))
        out[(None, EstimatorName.PROBIT)] = {
            probability_label(x): float(p) for x, p in zip(PROBABILITY_POINTS, probit, strict=True)
        }
    if dgp is DgpName.TOBIT_CONTRAST and any(abs(t - 0.5) < 1e-12 for t in config.taus):
        tobit = tobit_fit(d, sample.c_L, sample.c_H)
        out[(0.5, EstimatorName.TOBIT)] = _named(np.asarray(tobit.beta))
    return out


def _repetition_seed(config: BenchmarkConfig, dgp_index: int, rep: int) -> int:
    return int(np.random.SeedSequence([config.seed, dgp_index, rep]).generate_state(1)[0])


def _safe_repetition(dgp: DgpName, config: BenchmarkConfig, seed: int) -> Estimates | None:
    try:
        return _one_repetition(dgp, config, seed)
    except LdvqrError as e:
        logger.warning("Monte Carlo repetition failed", dgp=str(dgp), seed=seed, reason=e.message)
        return None


def _row_order(key: tuple[float | None, EstimatorName]) -> tuple[bool, float, int]:
    tau, estimator = key
    return tau is None, tau if tau is not None else 0.0, list(EstimatorName).index(estimator)


def run_benchmark(
    config: BenchmarkConfig, progress: Callable[[int], None] | None = None
) -> list[BenchmarkRow]:
    """
    Monte Carlo bias of naive and censoring-corrected quantile regression.

    Every repetition simulates a fresh sample from its own seed stream, fits
    the naive smoothed QR on the observed outcome and the corrected estimator
    (censored or binary QR), and the estimates are averaged over repetitions
    against the analytic oracle. The pooled design has no linear oracle, so
    its truth and bias are NaN. The binary design adds Probit probability
    rows at PROBABILITY_POINTS, scored against the exact P(y = 1 | x); those
    rows carry no quantile index.

    Args:
        config: Designs, sample size, repetitions, quantiles and master seed
        progress: Called with the number of finished repetitions per design

    Returns:
        Rows ordered by design, quantile, estimator and coefficient
    """
    rows: list[BenchmarkRow] = []
    workers = min(get_settings().workers, config.reps)

    for dgp_index, dgp in enumerate(config.dgps):
        seeds = [_repetition_seed(config, dgp_index, r) for r in range(config.reps)]
        logger.info("Running Monte Carlo design", dgp=str(dgp), reps=config.reps, n=config.n)
        with ThreadPoolExecutor(max_workers=workers) as executor:
            results = list(executor.map(lambda s: _safe_repetition(dgp, config, s), seeds))
        if progress is not None:
            progress(len(results))

        finished = [result for result in results if result is not None]
        keys = sorted({key for result in finished for key in result}, key=_row_order)
        for tau, estimator in keys:
            cells = [result[(tau, estimator)] for result in finished if (tau, estimator) in result]
            names = list(cells[0])
            draws = np.array([[cell[name] for name in names] for cell in cells], dtype=float)
            valid = draws[np.all(np.isfinite(draws), axis=1)]
            truth = _truth(dgp, tau, config.heter)
            for j, name in enumerate(names):
                count = valid.shape[0]
                mean = float(np.mean(valid[:, j])) if count else math.nan
                mc_se = (
                    float(np.std(valid[:, j], ddof=1) / math.sqrt(count)) if count > 1 else math.nan
                )
                rows.append(
                    BenchmarkRow(
                        dgp=dgp,
                        tau=tau,
                        estimator=estimator,
                        coef=name,
                        truth=truth[name],
                        mean_estimate=mean,
                        bias=mean - truth[name],
                        mc_se=mc_se,
                        n=config.n,
                        reps=count,
                    )
                )

    logger.save_artifact("benchmark", benchmark_frame(rows).to_csv(index=False))
    return rows


def benchmark_frame(rows: list[BenchmarkRow]) -> pd.DataFrame:
    """Benchmark rows as a table with the CSV column order."""
    columns = list(BenchmarkRow.model_fields)
    return pd.DataFrame([row.model_dump() for row in rows], columns=columns)
