"""Property tests for the Gaussian-smoothed kinks."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ldvqr.core.exceptions import InvalidSpecError
from ldvqr.optimize import fd_gradient
from ldvqr.smoothing import (
    PHI_0,
    bandwidth_rule,
    check_function,
    gauss_cdf,
    smoothed_check,
    smoothed_check_grad,
    smoothed_clamp,
    smoothed_clamp_grad,
    smoothed_max,
    smoothed_max_grad,
)

reals = st.floats(min_value=-50, max_value=50, allow_nan=False)
bandwidths = st.floats(min_value=1e-3, max_value=5.0)
taus = st.floats(min_value=0.01, max_value=0.99)


@given(t=reals, h=bandwidths)
def test_smoothed_max_bounds(t: float, h: float) -> None:
    """max(t, 0) <= S(t; h) <= max(t, 0) + h phi(0)."""
    s = smoothed_max(t, h)
    assert s >= max(t, 0.0) - 1e-12
    assert s <= max(t, 0.0) + h * PHI_0 + 1e-12


@given(u=reals, tau=taus, h=bandwidths)
def test_smoothed_check_bounds(u: float, tau: float, h: float) -> None:
    """The smoothed check function sits above rho with a gap of at most h phi(0)."""
    rho = check_function(u, tau)
    value = smoothed_check(u, tau, h)
    assert rho - 1e-12 <= value <= rho + h * PHI_0 + 1e-12


@given(u=reals, h=bandwidths)
def test_smoothed_clamp_stays_near_limits(u: float, h: float) -> None:
    """The smoothed clamp is within h phi(0) of the hard clamp."""
    hard = min(max(u, 0.0), 1.0)
    assert abs(smoothed_clamp(u, 0.0, 1.0, h) - hard) <= h * PHI_0 + 1e-12


@pytest.mark.parametrize("u", [-2.0, -0.3, 0.0, 0.4, 3.0])
def test_smoothing_limit(u: float) -> None:
    """As h shrinks the smoothed pieces reach their kinked originals."""
    h = 1e-8
    assert smoothed_max(u, h) == pytest.approx(max(u, 0.0), abs=1e-8)
    assert smoothed_check(u, 0.3, h) == pytest.approx(check_function(u, 0.3), abs=1e-8)
    assert smoothed_clamp(u, 0.0, 1.0, h) == pytest.approx(min(max(u, 0.0), 1.0), abs=1e-8)


def test_smoothed_max_at_kink() -> None:
    """S(0; h) = h phi(0)."""
    assert smoothed_max(0.0, 2.0) == pytest.approx(2.0 * PHI_0)


def test_smoothed_max_vectorized() -> None:
    """Arrays in, arrays out; -inf maps to zero."""
    out = smoothed_max(np.array([-np.inf, 0.0, 5.0]), 0.1)
    assert isinstance(out, np.ndarray)
    assert out[0] == 0.0
    assert out[2] == pytest.approx(5.0)


@pytest.mark.parametrize("u", [-1.5, -0.2, 0.05, 0.7, 2.0])
def test_analytic_gradients_match_finite_differences(u: float) -> None:
    """Closed-form derivatives agree with central differences."""
    h = 0.3
    x = np.array([u])
    cases = [
        (lambda v: smoothed_max(v[0], h), smoothed_max_grad(u, h)),
        (lambda v: smoothed_check(v[0], 0.25, h), smoothed_check_grad(u, 0.25, h)),
        (lambda v: smoothed_clamp(v[0], 0.0, 1.0, h), smoothed_clamp_grad(u, 0.0, 1.0, h)),
    ]
    for f, analytic in cases:
        assert fd_gradient(f, x)[0] == pytest.approx(analytic, rel=1e-5, abs=1e-8)


def test_clamp_with_infinite_limits() -> None:
    """Infinite limits drop their kink."""
    u = np.linspace(-3, 3, 7)
    np.testing.assert_allclose(smoothed_clamp(u, -math.inf, math.inf, 0.5), u)
    np.testing.assert_allclose(smoothed_clamp_grad(u, -math.inf, math.inf, 0.5), 1.0)
    upper_only = smoothed_clamp(u, -math.inf, 1.0, 1e-9)
    np.testing.assert_allclose(upper_only, np.minimum(u, 1.0), atol=1e-8)


def test_bandwidth_rule() -> None:
    """h = 0.9 sigma n^(-1/5)."""
    assert bandwidth_rule(1.0, 2000).h == pytest.approx(0.9 * 2000**-0.2)
    assert bandwidth_rule(0.5, 1).h == pytest.approx(0.45)


@pytest.mark.parametrize(("sigma", "n"), [(0.0, 100), (-1.0, 100), (1.0, 0), (math.inf, 10)])
def test_bandwidth_rule_rejects(sigma: float, n: int) -> None:
    """The rule needs a positive scale and sample size."""
    with pytest.raises(InvalidSpecError):
        bandwidth_rule(sigma, n)


def test_invalid_arguments() -> None:
    """Bandwidths, quantiles and limits are validated."""
    with pytest.raises(InvalidSpecError):
        smoothed_max(1.0, 0.0)
    with pytest.raises(InvalidSpecError):
        smoothed_check(1.0, 1.0, 0.1)
    with pytest.raises(InvalidSpecError):
        smoothed_clamp(0.5, 1.0, 0.0, 0.1)


@settings(max_examples=50)
@given(tau=taus, h=bandwidths)
def test_smoothed_check_convex(tau: float, h: float) -> None:
    """The derivative tau - Phi(-u / h) is nondecreasing."""
    u = np.linspace(-5, 5, 101)
    assert np.all(np.diff(smoothed_check_grad(u, tau, h)) >= -1e-12)


def test_gauss_cdf() -> None:
    """Phi(0) = 1/2, Phi(1.959964) = 0.975 and Phi(-40) underflows to 0."""
    assert gauss_cdf(0.0) == 0.5
    assert gauss_cdf(1.959964) == pytest.approx(0.975, abs=1e-7)
    assert gauss_cdf(-40.0) == 0.0
    np.testing.assert_allclose(gauss_cdf(np.array([-1.0, 1.0])).sum(), 1.0)


@given(u1=reals, u2=reals, h=bandwidths)
def test_smoothed_clamp_monotone(u1: float, u2: float, h: float) -> None:
    """u1 <= u2 implies C(u1) <= C(u2)."""
    lo, hi = sorted((u1, u2))
    assert smoothed_clamp(lo, 0.0, 1.0, h) <= smoothed_clamp(hi, 0.0, 1.0, h) + 1e-12
