"""Post-estimation predictions from a multi-quantile fit.

Averaging indicators over a grid of fitted quantile lines estimates
probabilities: P(y = 1 | x) is the share of lines with a positive index, and
the censoring probabilities are the shares below c_L and above c_H. The
smoothed forms replace each indicator by a Gaussian CDF with bandwidth pbw.
"""

import math
from typing import NamedTuple

import numpy as np
from numpy.typing import ArrayLike
from scipy.special import ndtr

from ldvqr.core.exceptions import InvalidSpecError
from ldvqr.core.logger import get_logger
from ldvqr.schemas.base import ModelKind
from ldvqr.schemas.model import Bandwidth, FitResult, tau_label
from ldvqr.schemas.prediction import PredictionSet

CROSSING_TOL = 1e-12

logger = get_logger()


class CensoringProbability(NamedTuple):
    """Probabilities of sitting at the lower limit, the upper limit, and either."""

    lo: np.ndarray
    hi: np.ndarray
    total: np.ndarray


def _design(fit: FitResult, X: ArrayLike) -> np.ndarray:
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if X.shape[1] != len(fit.names):
        raise InvalidSpecError(
            f"design has {X.shape[1]} columns but the fit has {len(fit.names)} coefficients",
            hint=f"columns must be {', '.join(fit.names)}",
        )
    return X


def _resolve_pbw(fit: FitResult, pbw: Bandwidth | float | None) -> float:
    if pbw is None:
        pbw = fit.spec.pbwidth if fit.spec.pbwidth is not None else fit.bandwidth
    value = pbw.h if isinstance(pbw, Bandwidth) else float(pbw)
    if not (value > 0 and math.isfinite(value)):
        raise InvalidSpecError(f"probability bandwidth must be positive, got {value}")
    return value


def _require_grid(fit: FitResult, what: str) -> None:
    if len(fit.coefs) < 2:
        raise InvalidSpecError(
            f"{what} requires at least 2 fitted quantiles",
            hint="fit a grid such as 10 20 30 40 50 60 70 80 90",
        )


def predict_censored_quantile(fit: FitResult, X: ArrayLike, tau: float) -> np.ndarray:
    """
    Censored quantile prediction min(max(x'beta(tau), c_L), c_H).

    Raises:
        InvalidSpecError: If tau was not fitted or X does not match the fit
    """
    X = _design(fit, X)
    try:
        coef = fit.coef_for(tau)
    except KeyError as e:
        raise InvalidSpecError(str(e.args[0])) from e
    return np.clip(X @ coef.array, fit.spec.c_L, fit.spec.c_H)


def censoring_probability(
    fit: FitResult, X: ArrayLike, pbw: Bandwidth | float | None = None
) -> tuple[CensoringProbability, CensoringProbability]:
    """
    Naive and smoothed probabilities of censoring at each row of X.

    Strict inequalities: a line counts as lower-censored when its index is
    below c_L and upper-censored when above c_H. Infinite limits contribute 0.

    Returns:
        (naive, smoothed)

    Raises:
        InvalidSpecError: If fewer than 2 quantiles were fitted or the fit is binary
    """
    if fit.spec.kind is ModelKind.BINARY:
        raise InvalidSpecError("censoring probabilities need a censored or plain fit")
    _require_grid(fit, "the probability of censoring")
    X = _design(fit, X)
    h = _resolve_pbw(fit, pbw)
    index = X @ fit.beta_matrix
    c_L, c_H = fit.spec.c_L, fit.spec.c_H
    zeros = np.zeros(X.shape[0])

    if math.isfinite(c_L):
        lo = np.mean(index < c_L, axis=1)
        lo_s = np.mean(ndtr((c_L - index) / h), axis=1)
    else:
        lo, lo_s = zeros, zeros
    if math.isfinite(c_H):
        hi = np.mean(index > c_H, axis=1)
        hi_s = np.mean(ndtr((index - c_H) / h), axis=1)
    else:
        hi, hi_s = zeros, zeros

    naive = CensoringProbability(lo=lo, hi=hi, total=lo + hi)
    smoothed = CensoringProbability(lo=lo_s, hi=hi_s, total=lo_s + hi_s)
    return naive, smoothed


def prob_one(
    fit: FitResult, X: ArrayLike, pbw: Bandwidth | float | None = None
) -> tuple[np.ndarray, np.ndarray]:
    """
    Naive and smoothed P(y = 1 | x) from a binary quantile grid.

    Raises:
        InvalidSpecError: If the fit is not binary or has fewer than 2 quantiles
    """
    if fit.spec.kind is not ModelKind.BINARY:
        raise InvalidSpecError("P(y = 1 | x) needs a binary quantile regression fit")
    _require_grid(fit, "the probability of a positive outcome")
    X = _design(fit, X)
    h = _resolve_pbw(fit, pbw)
    index = X @ fit.beta_matrix
    return np.mean(index > 0, axis=1), np.mean(ndtr(index / h), axis=1)


def probit_probability(fit: FitResult, X: ArrayLike) -> np.ndarray:
    """
    Parametric benchmark Phi(x'beta) from the Probit fit behind a binary grid.

    Raises:
        InvalidSpecError: If the fit carries no Probit coefficients
    """
    if fit.probit_beta is None:
        raise InvalidSpecError("Probit probabilities need a binary fit with its Probit start")
    X = _design(fit, X)
    return ndtr(X @ np.asarray(fit.probit_beta))


def crossing_fraction(fit: FitResult, X: ArrayLike) -> float:
    """Share of rows whose censored quantile predictions decrease in tau."""
    if len(fit.coefs) < 2:
        return 0.0
    X = _design(fit, X)
    index = X @ fit.beta_matrix
    if fit.spec.kind is not ModelKind.BINARY:
        index = np.clip(index, fit.spec.c_L, fit.spec.c_H)
    crossed = np.any(np.diff(index, axis=1) < -CROSSING_TOL, axis=1)
    return float(np.mean(crossed))


def build_predictions(
    fit: FitResult,
    X: ArrayLike,
    qcen: str | None = None,
    pcen: str | None = None,
    p1: str | None = None,
    pbw: Bandwidth | float | None = None,
) -> PredictionSet:
    """
    Named prediction columns for the requested prefixes.

    qcen adds {prefix}_q{100 tau} per quantile; pcen adds {prefix} and
    {prefix}_s totals plus _lo/_hi components; p1 adds {prefix} and {prefix}_s,
    plus {prefix}_probit when the fit carries Probit coefficients.
    """
    X = _design(fit, X)
    h = _resolve_pbw(fit, pbw)
    columns: dict[str, tuple[float, ...]] = {}

    if qcen:
        for tau in fit.taus:
            values = predict_censored_quantile(fit, X, tau)
            columns[f"{qcen}_{tau_label(tau)}"] = tuple(values.tolist())
    if pcen:
        naive, smoothed = censoring_probability(fit, X, h)
        columns[pcen] = tuple(naive.total.tolist())
        columns[f"{pcen}_s"] = tuple(smoothed.total.tolist())
        columns[f"{pcen}_lo"] = tuple(naive.lo.tolist())
        columns[f"{pcen}_hi"] = tuple(naive.hi.tolist())
        columns[f"{pcen}_lo_s"] = tuple(smoothed.lo.tolist())
        columns[f"{pcen}_hi_s"] = tuple(smoothed.hi.tolist())
    if p1:
        naive_p1, smoothed_p1 = prob_one(fit, X, h)
        columns[p1] = tuple(naive_p1.tolist())
        columns[f"{p1}_s"] = tuple(smoothed_p1.tolist())
        if fit.probit_beta is not None:
            columns[f"{p1}_probit"] = tuple(probit_probability(fit, X).tolist())

    crossing = crossing_fraction(fit, X) if fit.spec.kind is not ModelKind.BINARY else None
    if crossing:
        logger.warning(f"Quantile predictions cross on {crossing:.1%} of rows", crossing=crossing)
    return PredictionSet(columns=columns, m=len(fit.coefs), pbw=h, crossing_fraction=crossing)
