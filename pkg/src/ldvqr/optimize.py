"""Unconstrained minimization shared by all estimators."""

from collections.abc import Callable

import numpy as np
from numpy.typing import ArrayLike
from scipy.optimize import minimize

from ldvqr.core.logger import get_logger
from ldvqr.schemas.base import OptimMethod
from ldvqr.schemas.model import OptimResult

ObjectiveWithGrad = Callable[[np.ndarray], tuple[float, np.ndarray]]
Objective = Callable[[np.ndarray], float]

logger = get_logger()


class _NonFinite(Exception):
    """Internal signal: the objective left the finite domain."""

    def __init__(self, x: np.ndarray) -> None:
        self.x = x
        super().__init__(f"non-finite objective or gradient at {x.tolist()}")


def minimize_qn(
    f: ObjectiveWithGrad,
    x0: ArrayLike,
    tol_g: float = 1e-8,
    max_iter: int = 500,
) -> OptimResult:
    """
    Quasi-Newton (BFGS) minimization with an analytic gradient.

    Args:
        f: Returns (value, gradient) at a point
        x0: Starting point
        tol_g: Gradient sup-norm tolerance
        max_iter: Iteration cap

    Returns:
        OptimResult; converged is false when the iteration cap is hit, the
        gradient stays above tol_g, or a non-finite value is met
    """
    x0 = np.asarray(x0, dtype=float).copy()
    counter = {"iterations": 0}
    best: dict[str, object] = {"x": x0, "f": float("nan")}

    def guarded(x: np.ndarray) -> tuple[float, np.ndarray]:
        value, grad = f(x)
        grad = np.asarray(grad, dtype=float)
        if not (np.isfinite(value) and np.all(np.isfinite(grad))):
            raise _NonFinite(x.copy())
        if not value >= best["f"]:  # also true while best is nan
            best["x"], best["f"] = x.copy(), float(value)
        return float(value), grad

    def count(_: np.ndarray) -> None:
        counter["iterations"] += 1

    try:
        guarded(x0)
        result = minimize(
            guarded,
            x0,
            jac=True,
            method="BFGS",
            callback=count,
            options={"gtol": tol_g, "maxiter": max_iter},
        )
    except _NonFinite as e:
        logger.debug("Quasi-Newton stopped on a non-finite value", point=e.x.tolist())
        x_best = np.asarray(best["x"], dtype=float)
        return OptimResult(
            x_opt=tuple(x_best.tolist()),
            f_opt=float(best["f"]),  # type: ignore[arg-type]
            iterations=counter["iterations"],
            converged=False,
            method=OptimMethod.QUASI_NEWTON,
            message=str(e),
        )

    grad_norm = float(np.max(np.abs(result.jac))) if result.jac is not None else np.inf
    converged = bool(result.success) or grad_norm <= tol_g
    return OptimResult(
        x_opt=tuple(np.asarray(result.x, dtype=float).tolist()),
        f_opt=float(result.fun),
        iterations=int(result.nit),
        converged=converged,
        method=OptimMethod.QUASI_NEWTON,
        message=f"{result.message} (|g|={grad_norm:.2e})",
    )


def _nelder_mead(
    f: Objective, x0: np.ndarray, scale: float, tol_x: float, max_iter: int
) -> tuple[np.ndarray, float, int, bool]:
    dim = x0.size
    simplex = np.vstack([x0, x0 + scale * np.eye(dim)])
    result = minimize(
        f,
        x0,
        method="Nelder-Mead",
        options={
            "initial_simplex": simplex,
            "xatol": tol_x,
            "fatol": tol_x,
            "maxiter": max_iter,
            "maxfev": 2 * max_iter * (dim + 1),
            "adaptive": False,
        },
    )
    return np.asarray(result.x, dtype=float), float(result.fun), int(result.nit), result.status == 0


def minimize_simplex(
    f: Objective,
    x0: ArrayLike,
    scale: float,
    tol_x: float = 1e-8,
    max_iter: int = 2000,
) -> OptimResult:
    """
    Nelder-Mead minimization with reflection, expansion, contraction and shrink
    coefficients (1, 2, 0.5, 0.5).

    The axis simplex x0 + scale * e_i is refined once more from the best vertex
    at scale / 10, which unsticks collapsed simplices on kinked objectives.
    The best point evaluated, x0 included, is returned.
    """
    x0 = np.asarray(x0, dtype=float).copy()
    if not scale > 0:
        scale = 1.0
    f0 = float(f(x0))
    if not np.isfinite(f0):
        return OptimResult(
            x_opt=tuple(x0.tolist()),
            f_opt=f0,
            iterations=0,
            converged=False,
            method=OptimMethod.SIMPLEX,
            message="objective is not finite at the starting point",
        )

    def safe(x: np.ndarray) -> float:
        value = float(f(x))
        return value if np.isfinite(value) else np.inf

    x1, f1, it1, ok1 = _nelder_mead(safe, x0, scale, tol_x, max_iter)
    x2, f2, it2, ok2 = _nelder_mead(safe, x1, scale / 10.0, tol_x, max_iter)

    best_x, best_f = x0, f0
    for x, value in ((x1, f1), (x2, f2)):
        if value < best_f:
            best_x, best_f = x, value
    return OptimResult(
        x_opt=tuple(best_x.tolist()),
        f_opt=best_f,
        iterations=it1 + it2,
        converged=ok2,
        method=OptimMethod.SIMPLEX,
        message="simplex diameter below tolerance" if ok2 else "iteration cap reached",
    )


def fd_gradient(f: Objective, x: ArrayLike, step: float = 1e-6) -> np.ndarray:
    """Central finite-difference gradient."""
    x = np.asarray(x, dtype=float)
    grad = np.empty_like(x)
    for i in range(x.size):
        e = np.zeros_like(x)
        e[i] = step
        grad[i] = (f(x + e) - f(x - e)) / (2.0 * step)
    return grad
