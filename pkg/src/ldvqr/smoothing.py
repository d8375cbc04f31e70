"""Gaussian-kernel smoothing of the kinks in quantile objectives.

Every nonsmooth piece of the estimators is built from max(t, 0). Convolving it
with a Gaussian of scale h gives

    S(t; h) = t * Phi(t / h) + h * phi(t / h),

which is C-infinity, convex, bounded below by max(t, 0) with a gap of at most
h * phi(0), and has derivative Phi(t / h). The clamp and the check function are
linear combinations of max(., 0) terms and inherit these properties.
"""

import math

import numpy as np
from numpy.typing import ArrayLike
from scipy.special import ndtr
from scipy.stats import norm

from ldvqr.core.exceptions import InvalidSpecError
from ldvqr.schemas.model import Bandwidth

PHI_0 = 1.0 / math.sqrt(2.0 * math.pi)

# Silverman-type rule-of-thumb constant
BANDWIDTH_FACTOR = 0.9


def _check_h(h: float) -> None:
    if not (h > 0 and math.isfinite(h)):
        raise InvalidSpecError(f"bandwidth must be positive and finite, got {h}")


def _check_limits(c_L: float, c_H: float) -> None:
    if not c_L < c_H:
        raise InvalidSpecError(f"lower limit {c_L} must be below upper limit {c_H}")


def gauss_cdf(v: ArrayLike) -> np.ndarray | float:
    """Standard normal CDF (complementary error function based)."""
    return ndtr(v)


def gauss_pdf(v: ArrayLike) -> np.ndarray | float:
    """Standard normal density."""
    return norm.pdf(v)


def smoothed_max(t: ArrayLike, h: float) -> np.ndarray | float:
    """Gaussian convolution S(t; h) of max(t, 0)."""
    _check_h(h)
    t = np.asarray(t, dtype=float)
    s = t / h
    with np.errstate(invalid="ignore"):
        out = t * ndtr(s) + h * gauss_pdf(s)
    # t * Phi(t/h) is 0 * 0 far below the kink
    out = np.where(np.isneginf(t), 0.0, out)
    return out if out.ndim else float(out)


def smoothed_max_grad(t: ArrayLike, h: float) -> np.ndarray | float:
    """Derivative of S(t; h) in t."""
    _check_h(h)
    return ndtr(np.asarray(t, dtype=float) / h)


def smoothed_clamp(u: ArrayLike, c_L: float, c_H: float, h: float) -> np.ndarray | float:
    """
    Smoothed min(max(u, c_L), c_H).

    C(u) = c_L + S(u - c_L) - S(u - c_H). An infinite limit drops its kink:
    c_L = -inf leaves u - S(u - c_H), c_H = +inf leaves c_L + S(u - c_L).
    """
    _check_h(h)
    _check_limits(c_L, c_H)
    u = np.asarray(u, dtype=float)
    lower = u if math.isinf(c_L) else c_L + smoothed_max(u - c_L, h)
    upper = 0.0 if math.isinf(c_H) else smoothed_max(u - c_H, h)
    out = np.asarray(lower - upper, dtype=float)
    return out if out.ndim else float(out)


def smoothed_clamp_grad(u: ArrayLike, c_L: float, c_H: float, h: float) -> np.ndarray | float:
    """Derivative of the smoothed clamp in u."""
    _check_h(h)
    _check_limits(c_L, c_H)
    u = np.asarray(u, dtype=float)
    lower = 1.0 if math.isinf(c_L) else ndtr((u - c_L) / h)
    upper = 0.0 if math.isinf(c_H) else ndtr((u - c_H) / h)
    out = np.asarray(lower - upper, dtype=float) * np.ones_like(u)
    return out if out.ndim else float(out)


def _check_tau(tau: float) -> None:
    if not 0.0 < tau < 1.0:
        raise InvalidSpecError(f"quantile index must lie in (0, 1), got {tau}")


def smoothed_check(u: ArrayLike, tau: float, h: float) -> np.ndarray | float:
    """Smoothed check function tau * u + S(-u; h)."""
    _check_tau(tau)
    u = np.asarray(u, dtype=float)
    out = np.asarray(tau * u + smoothed_max(-u, h), dtype=float)
    return out if out.ndim else float(out)


def smoothed_check_grad(u: ArrayLike, tau: float, h: float) -> np.ndarray | float:
    """Derivative tau - Phi(-u / h) of the smoothed check function."""
    _check_tau(tau)
    _check_h(h)
    return tau - ndtr(-np.asarray(u, dtype=float) / h)


def check_function(u: ArrayLike, tau: float) -> np.ndarray | float:
    """Unsmoothed check function u * (tau - I{u < 0})."""
    _check_tau(tau)
    u = np.asarray(u, dtype=float)
    out = u * (tau - (u < 0))
    return out if out.ndim else float(out)


def bandwidth_rule(sigma_hat: float, n: int) -> Bandwidth:
    """
    Rule-of-thumb bandwidth h = 0.9 * sigma_hat * n^(-1/5).

    Raises:
        InvalidSpecError: If sigma_hat is not positive or n < 1
    """
    if not (sigma_hat > 0 and math.isfinite(sigma_hat)):
        raise InvalidSpecError(f"scale estimate must be positive, got {sigma_hat}")
    if n < 1:
        raise InvalidSpecError(f"sample size must be positive, got {n}")
    return Bandwidth(h=BANDWIDTH_FACTOR * sigma_hat * n ** (-0.2))
