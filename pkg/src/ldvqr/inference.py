"""Bootstrap covariance and Wald tests across quantiles."""

import warnings
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from numpy.typing import ArrayLike
from scipy import linalg
from scipy.stats import chi2

from ldvqr.core.data import INTERCEPT, Dataset
from ldvqr.core.exceptions import (
    BootstrapUnreliableError,
    InvalidSpecError,
    LdvqrError,
    NumericalError,
    WaldRankWarning,
)
from ldvqr.core.logger import get_logger
from ldvqr.core.settings import get_settings
from ldvqr.estimators import fit_quantiles
from ldvqr.schemas.base import SymmetryMode
from ldvqr.schemas.inference import BootstrapRecord, WaldResult
from ldvqr.schemas.model import TAU_MATCH_TOL, FitResult, ModelSpec, tau_label

MAX_ATTEMPTS = 5
MAX_FAILURE_RATE = 0.2
ALL_COVARIATES = "ALL"
# |R theta - r| below this share of max(1, |r|) counts as an exact fit
RESIDUAL_TOL = 1e-10

logger = get_logger()


# === Bootstrap ===


def _replicate(
    d: Dataset, spec: ModelSpec, h: float, starts: list[np.ndarray], index: int
) -> tuple[np.ndarray | None, int, str]:
    """One pairs-bootstrap replicate: (stacked estimates or None, redraws, last failure)."""
    reason = ""
    for attempt in range(MAX_ATTEMPTS):
        rng = np.random.default_rng([spec.seed, index, attempt])
        rows = rng.integers(0, d.n, size=d.n)
        try:
            coefs = fit_quantiles(d.take(rows), spec, h, starts, restarts=0)
        except LdvqrError as e:
            reason = e.message
            continue
        stacked = np.concatenate([c.array for c in coefs])
        if all(c.converged for c in coefs) and np.all(np.isfinite(stacked)):
            return stacked, attempt, ""
        reason = "optimizer did not converge"
    return None, MAX_ATTEMPTS, reason


def bootstrap(
    d: Dataset, spec: ModelSpec, point_fit: FitResult
) -> tuple[np.ndarray, BootstrapRecord]:
    """
    Joint pairs-bootstrap covariance of the stacked estimates.

    Every replicate refits all quantiles on the same resample, starting from
    the point estimates. Replicate b draws from the stream (seed, b, attempt)
    and results are reduced in replicate order, so V does not depend on the
    thread schedule.

    Args:
        d: Estimation sample
        spec: Model specification (reps, seed, quantiles)
        point_fit: Full-sample estimates; supplies starts and the bandwidth

    Returns:
        Covariance matrix ordered by (tau, coefficient) and the replicate record

    Raises:
        BootstrapUnreliableError: If more than 20% of replicates fail
    """
    starts = [c.array for c in point_fit.coefs]
    h = point_fit.bandwidth
    workers = min(get_settings().workers, spec.reps)
    logger.info("Starting bootstrap", reps=spec.reps, workers=workers, seed=spec.seed)

    with ThreadPoolExecutor(max_workers=workers) as executor:
        outcomes = list(
            executor.map(lambda b: _replicate(d, spec, h, starts, b), range(spec.reps))
        )

    rows = [row for row, _, _ in outcomes if row is not None]
    failed = [(b, reason) for b, (row, _, reason) in enumerate(outcomes) if row is None]
    redraws = sum(n for row, n, _ in outcomes if row is not None)

    if failed:
        logger.warning(f"{len(failed)} bootstrap replicates failed", failed=len(failed))
        logger.save_artifact(
            "bootstrap_failures", "\n".join(f"replicate {b}: {reason}" for b, reason in failed)
        )
    if len(failed) > MAX_FAILURE_RATE * spec.reps or len(rows) < 2:
        raise BootstrapUnreliableError(len(failed), spec.reps)

    matrix = np.vstack(rows)
    V = np.atleast_2d(np.cov(matrix, rowvar=False, ddof=1))
    V = 0.5 * (V + V.T)
    record = BootstrapRecord(
        replicates=tuple(tuple(r) for r in matrix.tolist()),
        failures=len(failed),
        redraws=redraws,
        seed=spec.seed,
    )
    logger.info("Bootstrap finished", completed=record.completed, failures=record.failures)
    return V, record


# === Wald tests ===


def wald_test(
    theta: ArrayLike,
    V: ArrayLike,
    R: ArrayLike,
    r: ArrayLike | None = None,
    constraints: Sequence[str] | None = None,
    name: str = "wald",
) -> WaldResult:
    """
    Chi-square Wald test of R theta = r.

    W = (R theta - r)' (R V R')^-1 (R theta - r). A singular R V R' falls back
    to the pseudo-inverse with df reduced to its numerical rank.
    A zero R V R' with R theta = r holding exactly gives W = 0 and p = 1.

    Raises:
        InvalidSpecError: On dimension mismatch
        NumericalError: If R V R' is numerically zero while R theta differs from r
    """
    theta = np.asarray(theta, dtype=float).ravel()
    V = np.atleast_2d(np.asarray(V, dtype=float))
    R = np.atleast_2d(np.asarray(R, dtype=float))
    q, dim = R.shape
    r = np.zeros(q) if r is None else np.asarray(r, dtype=float).ravel()
    if theta.size != dim or V.shape != (dim, dim) or r.size != q:
        raise InvalidSpecError(
            "dimension mismatch in Wald test: "
            f"theta {theta.size}, V {V.shape}, R {R.shape}, r {r.size}"
        )
    labels = tuple(constraints) if constraints is not None else tuple(
        f"row {i + 1}" for i in range(q)
    )

    diff = R @ theta - r
    S = R @ V @ R.T
    S = 0.5 * (S + S.T)
    eigenvalues = linalg.eigh(S, eigvals_only=True)
    top = float(np.max(np.abs(eigenvalues))) if eigenvalues.size else 0.0
    tol = top * q * np.finfo(float).eps
    rank = int(np.sum(eigenvalues > tol))
    if rank == 0:
        scale = max(1.0, float(np.max(np.abs(r), initial=0.0)))
        if float(np.max(np.abs(diff), initial=0.0)) <= RESIDUAL_TOL * scale:
            note = "R V R' is zero and R theta = r holds exactly; W set to 0"
            logger.warning(note, test=name)
            return WaldResult(
                name=name,
                statistic=0.0,
                df=q,
                p_value=1.0,
                constraints=labels,
                warnings=(note,),
            )
        raise NumericalError(
            "restriction covariance R V R' is zero; the Wald statistic is undefined",
            hint="the bootstrap found no sampling variation in the tested coefficients",
        )

    notes: list[str] = []
    if rank == q:
        statistic = float(diff @ linalg.solve(S, diff, assume_a="sym"))
    else:
        statistic = float(diff @ linalg.pinvh(S) @ diff)
        note = f"R V R' has rank {rank} < {q}; pseudo-inverse used and df reduced to {rank}"
        notes.append(note)
        logger.warning(note, test=name)
        warnings.warn(note, WaldRankWarning, stacklevel=2)

    statistic = max(statistic, 0.0)
    p_value = float(np.clip(chi2.sf(statistic, rank), 0.0, 1.0))
    return WaldResult(
        name=name,
        statistic=statistic,
        df=rank,
        p_value=p_value,
        constraints=labels,
        warnings=tuple(notes),
    )


def _tau_position(fit: FitResult, tau: float) -> int:
    for i, fitted in enumerate(fit.taus):
        if abs(fitted - tau) <= TAU_MATCH_TOL:
            return i
    raise InvalidSpecError(
        f"quantile {tau:g} was not fitted",
        hint=f"fitted quantiles: {', '.join(f'{t:g}' for t in fit.taus)}",
    )


def _covariates(fit: FitResult, covariate: str | Sequence[str]) -> list[str]:
    if isinstance(covariate, str):
        if covariate.upper() == ALL_COVARIATES:
            chosen = [n for n in fit.names if n != INTERCEPT]
            if not chosen:
                raise InvalidSpecError("homogeneity test needs at least one covariate")
            return chosen
        covariate = [covariate]
    chosen = list(covariate)
    for name in chosen:
        if name not in fit.names:
            raise InvalidSpecError(
                f"unknown covariate: {name}", hint=f"coefficients: {', '.join(fit.names)}"
            )
    return chosen


def homogeneity_test(fit: FitResult, covariate: str | Sequence[str] = ALL_COVARIATES) -> WaldResult:
    """
    Test that covariate coefficients are equal across all fitted quantiles.

    Constraints beta_j(tau_1) - beta_j(tau_m) = 0 for m = 2..M, ordered by m
    and then by covariate.

    Raises:
        InvalidSpecError: If fewer than two quantiles were fitted or a name is unknown
    """
    taus = fit.taus
    if len(taus) < 2:
        raise InvalidSpecError("homogeneity test needs at least two fitted quantiles")
    chosen = _covariates(fit, covariate)
    k = len(fit.names)
    rows, labels = [], []
    for m in range(1, len(taus)):
        for name in chosen:
            j = fit.names.index(name)
            row = np.zeros(k * len(taus))
            row[j] = 1.0
            row[m * k + j] = -1.0
            rows.append(row)
            labels.append(f"[{tau_label(taus[0])}]{name} - [{tau_label(taus[m])}]{name} = 0")
    return wald_test(
        fit.theta, fit.covariance, np.vstack(rows), constraints=labels, name="homogeneity"
    )


def symmetric_deltas(fit: FitResult) -> list[float]:
    """Every delta with both 0.5 - delta and 0.5 + delta fitted."""
    deltas = []
    for tau in fit.taus:
        mirrored = any(abs(t - (1.0 - tau)) <= TAU_MATCH_TOL for t in fit.taus)
        if tau < 0.5 - TAU_MATCH_TOL and mirrored:
            deltas.append(0.5 - tau)
    return sorted(deltas)


def symmetry_test(
    fit: FitResult,
    deltas: Sequence[float] | None = None,
    mode: SymmetryMode = SymmetryMode.PER_DELTA,
) -> WaldResult:
    """
    Test 0.5 * beta(0.5 - delta) + 0.5 * beta(0.5 + delta) - beta(0.5) = 0.

    PER_DELTA stacks K constraints for every delta; AVERAGED averages the
    pair midpoints over the deltas first, leaving K constraints. Without
    deltas, every symmetric pair present in the fit is used.

    Raises:
        InvalidSpecError: If 0.5 or a required pair was not fitted
    """
    if deltas is None:
        deltas = symmetric_deltas(fit)
        if not deltas:
            raise InvalidSpecError(
                "symmetry test needs quantile pairs 0.5 - delta and 0.5 + delta",
                hint="fit a grid such as 10 25 50 75 90",
            )
    for delta in deltas:
        if not 0.0 < delta < 0.5:
            raise InvalidSpecError(f"symmetry delta must lie in (0, 0.5), got {delta}")

    mid = _tau_position(fit, 0.5)
    pairs = [(_tau_position(fit, 0.5 - dl), _tau_position(fit, 0.5 + dl)) for dl in deltas]
    k = len(fit.names)
    dim = k * len(fit.taus)
    taus = fit.taus
    rows, labels = [], []

    if mode is SymmetryMode.PER_DELTA:
        for lo, hi in pairs:
            for j, name in enumerate(fit.names):
                row = np.zeros(dim)
                row[lo * k + j] += 0.5
                row[hi * k + j] += 0.5
                row[mid * k + j] -= 1.0
                rows.append(row)
                labels.append(
                    f"0.5*[{tau_label(taus[lo])}]{name} + 0.5*[{tau_label(taus[hi])}]{name}"
                    f" - [{tau_label(taus[mid])}]{name} = 0"
                )
    else:
        weight = 0.5 / len(pairs)
        grid = ",".join(tau_label(taus[i]) for i in sorted(i for pair in pairs for i in pair))
        for j, name in enumerate(fit.names):
            row = np.zeros(dim)
            for lo, hi in pairs:
                row[lo * k + j] += weight
                row[hi * k + j] += weight
            row[mid * k + j] -= 1.0
            rows.append(row)
            labels.append(f"mean({grid})[{name}] - [{tau_label(taus[mid])}]{name} = 0")

    return wald_test(
        fit.theta, fit.covariance, np.vstack(rows), constraints=labels, name="symmetry"
    )
