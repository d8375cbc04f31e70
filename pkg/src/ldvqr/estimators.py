"""Model fits: Tobit and Probit baselines, smoothed censored, binary and plain QR."""

import math
from collections.abc import Sequence

import numpy as np
from numpy.typing import ArrayLike
from pydantic import BaseModel, ConfigDict
from scipy import linalg
from scipy.special import log_ndtr, ndtr
from scipy.stats import norm

from ldvqr.core.data import Dataset
from ldvqr.core.exceptions import ConvergenceError, DegenerateDataError, InvalidSpecError
from ldvqr.core.logger import get_logger
from ldvqr.optimize import ObjectiveWithGrad, minimize_qn, minimize_simplex
from ldvqr.schemas.base import ModelKind
from ldvqr.schemas.inference import BootstrapRecord
from ldvqr.schemas.model import CoefVector, FitResult, ModelSpec, OptimResult, ProbitFit, TobitFit
from ldvqr.smoothing import (
    bandwidth_rule,
    gauss_pdf,
    smoothed_check,
    smoothed_check_grad,
    smoothed_clamp,
    smoothed_clamp_grad,
)

LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)
NORM_COLLAPSE = 1e-12
N_RESTARTS = 3
RESTART_SCALE = 0.1
MAX_COLLAPSE_RETRIES = 5
# Residual scales below this share of sd(y) count as zero
ZERO_SCALE_TOL = 1e-10

logger = get_logger()


class _NormCollapse(Exception):
    """Internal signal: the binary search direction shrank to zero."""


# === Baselines ===


def ols(X: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Least-squares coefficients."""
    beta, *_ = linalg.lstsq(X, y)
    return np.asarray(beta, dtype=float)


def _mills(v: np.ndarray) -> np.ndarray:
    """phi(v) / Phi(v), stable in the lower tail."""
    return np.exp(norm.logpdf(v) - log_ndtr(v))


def tobit_fit(d: Dataset, c_L: float = -math.inf, c_H: float = math.inf) -> TobitFit:
    """
    Gaussian maximum likelihood for a censored outcome.

    Optimizes over (beta, log sigma) from least squares on the uncensored rows.

    Raises:
        DegenerateDataError: If no observation lies strictly inside the limits
    """
    if not c_L < c_H:
        raise InvalidSpecError(f"lower limit {c_L} must be below upper limit {c_H}")
    y, X = d.y, d.X
    lower = np.isfinite(c_L) & (y <= c_L)
    upper = np.isfinite(c_H) & (y >= c_H)
    inside = ~(lower | upper)
    n_inside = int(inside.sum())
    if n_inside == 0:
        raise DegenerateDataError(
            "no uncensored observations",
            hint="every observation sits on a censoring limit; check ll/ul",
        )

    beta0 = ols(X[inside], y[inside])
    resid = y[inside] - X[inside] @ beta0
    scale = float(np.sqrt(np.mean(resid**2)))
    scale = max(scale, 1e-8 * max(1.0, float(np.std(y))))
    n = d.n

    def negloglik(theta: np.ndarray) -> tuple[float, np.ndarray]:
        beta, log_sigma = theta[:-1], theta[-1]
        sigma = math.exp(log_sigma)
        xb = X @ beta
        grad_beta = np.zeros_like(beta)
        grad_ls = 0.0
        total = 0.0

        z = (y[inside] - xb[inside]) / sigma
        total += float(np.sum(-0.5 * z**2 - LOG_SQRT_2PI - log_sigma))
        grad_beta += X[inside].T @ z / sigma
        grad_ls += float(np.sum(z**2 - 1.0))

        if lower.any():
            a = (c_L - xb[lower]) / sigma
            lam = _mills(a)
            total += float(np.sum(log_ndtr(a)))
            grad_beta -= X[lower].T @ lam / sigma
            grad_ls -= float(np.sum(lam * a))
        if upper.any():
            c = (xb[upper] - c_H) / sigma
            lam = _mills(c)
            total += float(np.sum(log_ndtr(c)))
            grad_beta += X[upper].T @ lam / sigma
            grad_ls -= float(np.sum(lam * c))

        grad = np.append(grad_beta, grad_ls)
        return -total / n, -grad / n

    result = minimize_qn(negloglik, np.append(beta0, math.log(scale)))
    beta = result.x[:-1]
    sigma = math.exp(result.x[-1])
    if not result.converged:
        logger.warning("Tobit likelihood did not converge", detail=result.message)
    logger.debug(
        "Tobit fit",
        sigma=sigma,
        n_lower=int(lower.sum()),
        n_upper=int(upper.sum()),
        n_uncensored=n_inside,
    )
    return TobitFit(
        beta=tuple(beta.tolist()),
        sigma=sigma,
        loglik=-result.f_opt * n,
        converged=result.converged,
        n_lower=int(lower.sum()),
        n_upper=int(upper.sum()),
        n_uncensored=n_inside,
    )


def _binary_outcome(d: Dataset) -> np.ndarray:
    """Outcome as booleans; both classes must be present."""
    ones = d.y > 0.5
    if ones.all() or not ones.any():
        raise DegenerateDataError(
            "binary outcome has a single class",
            hint="both 0 and 1 must appear in the estimation sample",
        )
    return ones


def probit_fit(d: Dataset) -> ProbitFit:
    """
    Probit maximum likelihood from a zero start.

    Raises:
        DegenerateDataError: If only one outcome class is present
    """
    ones = _binary_outcome(d)
    q = np.where(ones, 1.0, -1.0)
    X = d.X
    n = d.n

    def negloglik(beta: np.ndarray) -> tuple[float, np.ndarray]:
        v = q * (X @ beta)
        value = -float(np.mean(log_ndtr(v)))
        grad = -(X.T @ (q * _mills(v))) / n
        return value, grad

    result = minimize_qn(negloglik, np.zeros(d.K))
    beta = result.x
    xb = X @ beta
    weights = np.exp(2.0 * norm.logpdf(xb) - log_ndtr(xb) - log_ndtr(-xb))
    information = (X * weights[:, None]).T @ X
    cov = linalg.pinvh(information)

    message = result.message
    converged = result.converged
    if result.f_opt < 1e-6:
        converged = False
        message = "perfect separation: the likelihood has no finite maximizer"
    if not converged:
        logger.warning("Probit likelihood did not converge", detail=message)
    return ProbitFit(
        beta=tuple(beta.tolist()),
        loglik=-result.f_opt * n,
        converged=converged,
        cov=tuple(tuple(row) for row in cov.tolist()),
        message=message,
    )


def normalize_coefficients(
    beta: ArrayLike, cov: ArrayLike | None = None
) -> tuple[np.ndarray, np.ndarray | None]:
    """
    Scale coefficients to unit Euclidean length, with delta-method covariance.

    The Jacobian of b / |b| is (I - u u') / |b| with u = b / |b|.
    """
    b = np.asarray(beta, dtype=float)
    length = float(np.sqrt(b @ b))
    if length == 0:
        raise DegenerateDataError("cannot normalize a zero coefficient vector")
    u = b / length
    if cov is None:
        return u, None
    jac = (np.eye(b.size) - np.outer(u, u)) / length
    return u, jac @ np.asarray(cov, dtype=float) @ jac.T


# === Smoothed objectives ===


def cqr_objective(
    b: np.ndarray,
    y: np.ndarray,
    X: np.ndarray,
    tau: float,
    c_L: float,
    c_H: float,
    h: float,
) -> tuple[float, np.ndarray]:
    """Smoothed Powell objective n^-1 sum rho~(y - C~(x'b)) and its gradient."""
    index = X @ b
    resid = y - smoothed_clamp(index, c_L, c_H, h)
    value = float(np.mean(smoothed_check(resid, tau, h)))
    weight = smoothed_check_grad(resid, tau, h) * smoothed_clamp_grad(index, c_L, c_H, h)
    grad = -(X.T @ weight) / y.shape[0]
    return value, grad


def bqr_objective(
    b: np.ndarray, y: np.ndarray, X: np.ndarray, tau: float, h: float
) -> tuple[float, np.ndarray]:
    """
    Negative smoothed maximum score n^-1 sum [y - (1 - tau)] Phi(x'u / h), u = b / |b|.

    Evaluating at the normalized direction makes the value scale invariant.
    """
    length = math.sqrt(float(np.dot(b, b)))
    if length < NORM_COLLAPSE:
        raise _NormCollapse()
    u = b / length
    s = (X @ u) / h
    w = y - (1.0 - tau)
    value = -float(np.mean(w * ndtr(s)))
    g_u = (X.T @ (w * gauss_pdf(s))) / (h * y.shape[0])
    grad = -(g_u - u * float(u @ g_u)) / length
    return value, grad


# === Quantile fits ===


def _perturbed_starts(b0: np.ndarray, restarts: int, rng: np.random.Generator) -> list[np.ndarray]:
    scale = RESTART_SCALE * float(np.linalg.norm(b0))
    if scale == 0:
        scale = RESTART_SCALE
    return [b0] + [b0 + rng.normal(0.0, scale, size=b0.size) for _ in range(restarts)]


def _polish(
    objective: ObjectiveWithGrad, start: np.ndarray, h: float
) -> tuple[OptimResult, OptimResult]:
    qn = minimize_qn(objective, start)
    origin = qn.x if np.all(np.isfinite(qn.x)) else start
    scale = max(0.01 * float(np.max(np.abs(origin))), 0.1 * h)
    simplex = minimize_simplex(lambda b: objective(b)[0], origin, scale)
    return qn, simplex


def _best_of(
    objective: ObjectiveWithGrad,
    starts: Sequence[np.ndarray],
    h: float,
    label: str,
) -> tuple[np.ndarray, float, bool]:
    best_x: np.ndarray | None = None
    best_f = math.inf
    converged = False
    failures: list[str] = []
    for i, start in enumerate(starts):
        qn, simplex = _polish(objective, start, h)
        candidates = [r for r in (qn, simplex) if np.isfinite(r.f_opt)]
        if not candidates:
            failures.append(f"start {i}: non-finite objective")
        for r in candidates:
            if r.f_opt < best_f:
                best_x, best_f = r.x, r.f_opt
                converged = qn.converged or simplex.converged
        logger.debug(
            f"{label} start {i}",
            f_qn=qn.f_opt,
            f_simplex=simplex.f_opt,
            qn_converged=qn.converged,
            simplex_converged=simplex.converged,
        )
    if best_x is None or not np.all(np.isfinite(best_x)):
        raise ConvergenceError(f"{label}: no start reached a finite objective", failures)
    return best_x, best_f, converged


def cqr_fit(
    d: Dataset,
    tau: float,
    c_L: float,
    c_H: float,
    h: float,
    b0: ArrayLike,
    restarts: int = N_RESTARTS,
    seed: int = 0,
) -> CoefVector:
    """
    Censored quantile regression by the smoothed Powell objective.

    Runs quasi-Newton then a simplex polish from b0 and from `restarts`
    Gaussian perturbations of it; the lowest objective wins.

    Raises:
        InvalidSpecError: If the limits are not ordered
        DegenerateDataError: If no observation lies strictly inside the limits
        ConvergenceError: If no start reaches a finite objective
    """
    if not c_L < c_H:
        raise InvalidSpecError(f"lower limit {c_L} must be below upper limit {c_H}")
    y, X = d.y, d.X
    if not np.any((y > c_L) & (y < c_H)):
        raise DegenerateDataError("no uncensored observations for censored quantile regression")

    def objective(b: np.ndarray) -> tuple[float, np.ndarray]:
        return cqr_objective(b, y, X, tau, c_L, c_H, h)

    start = np.asarray(b0, dtype=float)
    rng = np.random.default_rng(seed)
    beta, value, converged = _best_of(
        objective, _perturbed_starts(start, restarts, rng), h, f"cqr tau={tau}"
    )
    return CoefVector(
        tau=tau,
        beta=tuple(beta.tolist()),
        unit_norm=False,
        objective=value,
        converged=converged,
    )


def sqr_fit(
    d: Dataset,
    tau: float,
    h: float,
    b0: ArrayLike,
    restarts: int = N_RESTARTS,
    seed: int = 0,
) -> CoefVector:
    """Smoothed quantile regression without censoring."""
    return cqr_fit(d, tau, -math.inf, math.inf, h, b0, restarts=restarts, seed=seed)


def bqr_fit(
    d: Dataset,
    tau: float,
    h: float,
    b0: ArrayLike,
    restarts: int = N_RESTARTS,
    seed: int = 0,
) -> CoefVector:
    """
    Binary quantile regression by the smoothed maximum score on the unit sphere.

    Raises:
        DegenerateDataError: If only one outcome class is present
        InvalidSpecError: If b0 is the zero vector
        ConvergenceError: If no start reaches a finite objective
    """
    _binary_outcome(d)
    start = np.asarray(b0, dtype=float)
    if float(np.linalg.norm(start)) <= 0:
        raise InvalidSpecError("binary quantile regression needs a nonzero starting vector")
    y, X = d.y, d.X

    def objective(b: np.ndarray) -> tuple[float, np.ndarray]:
        return bqr_objective(b, y, X, tau, h)

    rng = np.random.default_rng(seed)
    starts = _perturbed_starts(start, restarts, rng)
    for _ in range(MAX_COLLAPSE_RETRIES):
        try:
            beta, value, converged = _best_of(objective, starts, h, f"bqr tau={tau}")
            break
        except _NormCollapse:
            logger.debug("Binary search direction collapsed; restarting", tau=tau)
            starts = _perturbed_starts(start, restarts, rng)[1:] or [
                start + rng.normal(0.0, RESTART_SCALE, size=start.size)
            ]
    else:
        beta, value, converged = start, math.nan, False

    unit = beta / math.sqrt(float(np.dot(beta, beta)))
    return CoefVector(
        tau=tau,
        beta=tuple(unit.tolist()),
        unit_norm=True,
        objective=value,
        converged=converged,
    )


# === Multi-quantile dispatch ===


class PointFit(BaseModel):
    """Point estimates before inference."""

    model_config = ConfigDict(frozen=True)

    coefs: tuple[CoefVector, ...]
    bandwidth: float
    sigma_hat: float
    sigma_source: str
    diagnostics: tuple[str, ...] = ()
    probit_beta: tuple[float, ...] | None = None


def quantile_starts(
    d: Dataset, spec: ModelSpec, probit: ProbitFit | None = None
) -> tuple[float, str, list[np.ndarray]]:
    """
    Scale estimate and one starting vector per quantile.

    Censored and plain models start on the Gaussian quantile line
    beta + sigma_hat * z_tau on the intercept; binary models start at the
    normalized Probit vector (fitted here unless passed in).
    """
    cons = d.intercept_index
    if spec.kind is ModelKind.BINARY:
        probit = probit if probit is not None else probit_fit(d)
        start, _ = normalize_coefficients(probit.beta)
        return 1.0, "probit_normalization", [start.copy() for _ in spec.taus]

    if spec.kind is ModelKind.CENSORED:
        tobit = tobit_fit(d, spec.c_L, spec.c_H)
        beta = np.asarray(tobit.beta)
        sigma_hat, source = tobit.sigma, "tobit"
    else:
        beta = ols(d.X, d.y)
        resid = d.y - d.X @ beta
        sigma_hat = float(np.std(resid, ddof=1)) if d.n > 1 else 0.0
        source = "ols_residual_sd"

    starts = []
    for tau in spec.taus:
        start = beta.copy()
        if cons is not None:
            start[cons] += sigma_hat * norm.ppf(tau)
        starts.append(start)
    return sigma_hat, source, starts


def fit_quantiles(
    d: Dataset,
    spec: ModelSpec,
    h: float,
    starts: Sequence[np.ndarray],
    restarts: int = N_RESTARTS,
) -> list[CoefVector]:
    """Fit every quantile in spec.taus from the given starting vectors."""
    coefs = []
    for i, (tau, start) in enumerate(zip(spec.taus, starts, strict=True)):
        seed = int(np.random.SeedSequence([spec.seed, i]).generate_state(1)[0])
        if spec.kind is ModelKind.BINARY:
            coef = bqr_fit(d, tau, h, start, restarts=restarts, seed=seed)
        elif spec.is_censored:
            coef = cqr_fit(d, tau, spec.c_L, spec.c_H, h, start, restarts=restarts, seed=seed)
        else:
            coef = sqr_fit(d, tau, h, start, restarts=restarts, seed=seed)
        coefs.append(coef)
    return coefs


def fit_point(d: Dataset, spec: ModelSpec) -> PointFit:
    """
    Point estimates for every quantile in spec.taus.

    Raises:
        DegenerateDataError: If the outcome cannot identify the model
    """
    if spec.kind is ModelKind.CENSORED and not np.any((d.y > spec.c_L) & (d.y < spec.c_H)):
        raise DegenerateDataError(
            "all observations are censored",
            hint="censored quantile regression needs observations strictly inside the limits",
        )
    probit = probit_fit(d) if spec.kind is ModelKind.BINARY else None
    sigma_hat, source, starts = quantile_starts(d, spec, probit)
    if spec.bwidth is not None:
        h = spec.bwidth
    elif sigma_hat > ZERO_SCALE_TOL * max(1.0, float(np.std(d.y))):
        h = bandwidth_rule(sigma_hat, d.n).h
    else:
        raise DegenerateDataError(
            "residual scale is zero, so the bandwidth rule is undefined",
            hint="supply an explicit bandwidth (bwidth)",
        )
    logger.info(
        "Fitting quantiles",
        kind=str(spec.kind),
        taus=list(spec.taus),
        bandwidth=h,
        sigma_hat=sigma_hat,
    )

    coefs = fit_quantiles(d, spec, h, starts)
    diagnostics = []
    if spec.kind is ModelKind.PLAIN:
        diagnostics.append("sigma_hat from OLS residual standard deviation (plain model)")
    for coef in coefs:
        if not coef.converged:
            message = f"optimizer did not converge at tau={coef.tau:g}"
            logger.warning(message)
            diagnostics.append(message)
    return PointFit(
        coefs=tuple(coefs),
        bandwidth=h,
        sigma_hat=sigma_hat,
        sigma_source=source,
        diagnostics=tuple(diagnostics),
        probit_beta=probit.beta if probit is not None else None,
    )


def fit_with_record(d: Dataset, spec: ModelSpec) -> tuple[FitResult, BootstrapRecord]:
    """
    Point estimates for every quantile plus the joint bootstrap covariance,
    together with the stored bootstrap replicates.

    Raises:
        DegenerateDataError: If the outcome cannot identify the model
        BootstrapUnreliableError: If more than 20% of replicates fail
    """
    from ldvqr.inference import bootstrap

    point = fit_point(d, spec)
    dim = d.K * len(spec.taus)
    preliminary = FitResult(
        spec=spec,
        depvar=d.depvar,
        names=d.names,
        coefs=point.coefs,
        V=tuple((0.0,) * dim for _ in range(dim)),
        bandwidth=point.bandwidth,
        sigma_hat=point.sigma_hat,
        sigma_source=point.sigma_source,
        n=d.n,
        reps_completed=0,
        reps_failed=0,
        converged=all(c.converged for c in point.coefs),
        diagnostics=point.diagnostics,
        probit_beta=point.probit_beta,
    )
    V, record = bootstrap(d, spec, preliminary)
    diagnostics = list(point.diagnostics)
    if record.failures:
        diagnostics.append(f"{record.failures} of {spec.reps} bootstrap replicates failed")
    fit = preliminary.model_copy(
        update={
            "V": tuple(tuple(row) for row in V.tolist()),
            "reps_completed": record.completed,
            "reps_failed": record.failures,
            "diagnostics": tuple(diagnostics),
        }
    )
    return fit, record


def fit_all(d: Dataset, spec: ModelSpec) -> FitResult:
    """Point estimates for every quantile plus the joint bootstrap covariance."""
    return fit_with_record(d, spec)[0]
