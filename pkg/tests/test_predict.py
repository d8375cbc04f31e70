"""Tests for censored-quantile and probability predictions."""

import math
from collections.abc import Callable

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.stats import norm

from ldvqr.core.exceptions import InvalidSpecError
from ldvqr.predict import (
    build_predictions,
    censoring_probability,
    crossing_fraction,
    predict_censored_quantile,
    prob_one,
    probit_probability,
)
from ldvqr.schemas.base import ModelKind
from ldvqr.schemas.model import FitResult

X = np.array([[-1.0, 1.0], [0.2, 1.0], [0.5, 1.0], [2.0, 1.0]])

# Lines with a positive slope, as (slope, intercept) pairs
rising_lines = st.lists(
    st.tuples(st.floats(0.1, 3.0), st.floats(-3.0, 3.0)), min_size=2, max_size=6
)


@pytest.fixture
def censored_fit(fit_factory: Callable[..., FitResult]) -> FitResult:
    """Slope 1 at every quantile with intercepts -0.2, 0, 0.2."""
    return fit_factory([(1.0, -0.2), (1.0, 0.0), (1.0, 0.2)], (0.2, 0.5, 0.8))


@pytest.fixture
def binary_fit(fit_factory: Callable[..., FitResult]) -> FitResult:
    """Unit-norm lines crossing zero at x = 1, 2 and 4."""
    lines = [(1.0, -1.0), (1.0, -2.0), (1.0, -4.0)]
    betas = [tuple(np.array(b) / math.hypot(*b)) for b in lines]
    return fit_factory(betas, (0.25, 0.5, 0.75), kind=ModelKind.BINARY, bandwidth=0.2)


@pytest.mark.unit
class TestCensoredQuantile:
    """Tests for predict_censored_quantile."""

    def test_clamped_to_limits(self, censored_fit) -> None:
        """Predictions are x'beta clamped to [c_L, c_H]."""
        pred = predict_censored_quantile(censored_fit, X, 0.8)

        np.testing.assert_allclose(pred, [0.0, 0.4, 0.7, 1.0])

    def test_unfitted_tau(self, censored_fit) -> None:
        """Only fitted quantiles can be predicted."""
        with pytest.raises(InvalidSpecError, match="not fitted"):
            predict_censored_quantile(censored_fit, X, 0.3)

    def test_design_mismatch(self, censored_fit) -> None:
        """The design must have one column per coefficient."""
        with pytest.raises(InvalidSpecError, match="columns"):
            predict_censored_quantile(censored_fit, X[:, :1], 0.5)


@pytest.mark.unit
class TestCensoringProbability:
    """Tests for censoring_probability."""

    def test_naive_counts(self, censored_fit) -> None:
        """Naive probabilities are shares of lines outside the limits."""
        naive, _ = censoring_probability(censored_fit, X)

        np.testing.assert_allclose(naive.lo, [1.0, 0.0, 0.0, 0.0])
        np.testing.assert_allclose(naive.hi, [0.0, 0.0, 0.0, 1.0])
        np.testing.assert_allclose(naive.total, naive.lo + naive.hi)

    def test_naive_probabilities_on_grid(self, censored_fit) -> None:
        """Naive values are multiples of 1/m."""
        x = np.column_stack([np.linspace(-0.5, 1.5, 41), np.ones(41)])

        naive, smoothed = censoring_probability(censored_fit, x)

        m = 3
        np.testing.assert_allclose(naive.total * m, np.round(naive.total * m))
        assert np.all((smoothed.total >= 0) & (smoothed.total <= 1))

    def test_strict_inequality_at_limit(self, fit_factory) -> None:
        """An index exactly at c_L is not censored."""
        fit = fit_factory([(0.0, 0.0), (0.0, 0.5)], (0.25, 0.75))

        naive, smoothed = censoring_probability(fit, np.array([[1.0, 1.0]]), pbw=0.1)

        assert naive.lo[0] == 0.0
        # Phi(0) for the line at the limit, Phi(-5) for the other
        assert smoothed.lo[0] == pytest.approx((0.5 + norm.cdf(-5.0)) / 2)

    def test_infinite_limit_contributes_nothing(self, fit_factory) -> None:
        """Without an upper limit nothing is upper-censored."""
        fit = fit_factory([(1.0, 0.0), (1.0, 0.5)], (0.25, 0.75), c_H=math.inf)

        naive, smoothed = censoring_probability(fit, X)

        np.testing.assert_array_equal(naive.hi, 0.0)
        np.testing.assert_array_equal(smoothed.hi, 0.0)

    def test_requires_grid(self, fit_factory) -> None:
        """A single quantile cannot estimate a probability."""
        fit = fit_factory([(1.0, 0.0)], (0.5,))

        with pytest.raises(InvalidSpecError, match="at least 2"):
            censoring_probability(fit, X)

    def test_not_for_binary(self, binary_fit) -> None:
        """Binary fits have no censoring limits."""
        with pytest.raises(InvalidSpecError):
            censoring_probability(binary_fit, X)

    @settings(max_examples=50)
    @given(lines=rising_lines)
    def test_lower_share_falls_with_the_index(self, fit_factory, lines) -> None:
        """With rising lines, P(y = c_L | x) never increases in x."""
        taus = tuple(round(t, 4) for t in np.linspace(0.1, 0.9, len(lines)))
        fit = fit_factory(lines, taus, c_L=0.0, c_H=math.inf)
        x = np.column_stack([np.linspace(-5.0, 5.0, 101), np.ones(101)])

        naive, smoothed = censoring_probability(fit, x, pbw=0.3)

        assert np.all(np.diff(naive.lo) <= 0)
        assert np.all(np.diff(smoothed.lo) <= 1e-15)

    @given(
        x=st.lists(
            st.floats(-2.0, 3.0).filter(
                lambda v: min(abs(v - b) for b in (-0.2, 0.0, 0.2, 0.8, 1.0, 1.2)) > 1e-3
            ),
            min_size=1,
            max_size=20,
        )
    )
    def test_tiny_bandwidth_recovers_naive(self, fit_factory, x) -> None:
        """Away from the limits the smoothed probabilities equal the counts as pbw -> 0."""
        fit = fit_factory([(1.0, -0.2), (1.0, 0.0), (1.0, 0.2)], (0.2, 0.5, 0.8))
        design = np.column_stack([x, np.ones(len(x))])

        naive, smoothed = censoring_probability(fit, design, pbw=1e-8)

        np.testing.assert_allclose(smoothed.lo, naive.lo, atol=1e-12)
        np.testing.assert_allclose(smoothed.hi, naive.hi, atol=1e-12)


@pytest.mark.unit
class TestProbOne:
    """Tests for prob_one."""

    def test_naive_share_of_positive_lines(self, binary_fit) -> None:
        """P(y = 1 | x) counts lines with a positive index."""
        x = np.column_stack([[0.5, 1.5, 3.0, 5.0], np.ones(4)])

        naive, smoothed = prob_one(binary_fit, x)

        np.testing.assert_allclose(naive, [0.0, 1 / 3, 2 / 3, 1.0])
        assert np.all(np.diff(smoothed) > 0)

    def test_smoothed_uses_pbw(self, binary_fit) -> None:
        """A wider bandwidth pulls probabilities towards one half."""
        x = np.array([[5.0, 1.0]])

        _, narrow = prob_one(binary_fit, x, pbw=0.01)
        _, wide = prob_one(binary_fit, x, pbw=10.0)

        assert narrow[0] == pytest.approx(1.0)
        assert 0.5 < wide[0] < narrow[0]

    def test_requires_binary(self, censored_fit) -> None:
        """Only binary fits predict P(y = 1 | x)."""
        with pytest.raises(InvalidSpecError, match="binary"):
            prob_one(censored_fit, X)

    @settings(max_examples=50)
    @given(lines=rising_lines)
    def test_naive_rises_with_the_index(self, fit_factory, lines) -> None:
        """With rising lines, the share of positive indices never falls in x."""
        taus = tuple(round(t, 4) for t in np.linspace(0.1, 0.9, len(lines)))
        betas = [tuple(np.array(b) / math.hypot(*b)) for b in lines]
        fit = fit_factory(betas, taus, kind=ModelKind.BINARY)
        x = np.column_stack([np.linspace(-5.0, 5.0, 101), np.ones(101)])

        naive, smoothed = prob_one(fit, x, pbw=0.3)

        assert np.all(np.diff(naive) >= 0)
        assert np.all(np.diff(smoothed) >= -1e-15)

    @given(
        x=st.lists(
            st.floats(-5.0, 10.0).filter(lambda v: min(abs(v - c) for c in (1.0, 2.0, 4.0)) > 1e-3),
            min_size=1,
            max_size=20,
        )
    )
    def test_tiny_bandwidth_recovers_naive(self, fit_factory, x) -> None:
        """Off the zero crossings the smoothed P(y = 1 | x) equals the count as pbw -> 0."""
        lines = [(1.0, -1.0), (1.0, -2.0), (1.0, -4.0)]
        betas = [tuple(np.array(b) / math.hypot(*b)) for b in lines]
        fit = fit_factory(betas, (0.25, 0.5, 0.75), kind=ModelKind.BINARY)
        design = np.column_stack([x, np.ones(len(x))])

        naive, smoothed = prob_one(fit, design, pbw=1e-8)

        np.testing.assert_allclose(smoothed, naive, atol=1e-12)


@pytest.mark.unit
class TestProbitProbability:
    """Tests for probit_probability."""

    def test_normal_cdf_of_the_index(self, binary_fit) -> None:
        """Phi(x'beta) with the stored Probit coefficients."""
        fit = binary_fit.model_copy(update={"probit_beta": (0.8, -2.0)})

        np.testing.assert_allclose(
            probit_probability(fit, X), norm.cdf(0.8 * X[:, 0] - 2.0), rtol=1e-12
        )

    def test_requires_probit_coefficients(self, binary_fit) -> None:
        """A fit without a Probit start cannot provide the benchmark."""
        with pytest.raises(InvalidSpecError, match="Probit"):
            probit_probability(binary_fit, X)


@pytest.mark.unit
class TestBuildPredictions:
    """Tests for crossing detection and named columns."""

    def test_crossing_fraction(self, fit_factory) -> None:
        """Rows whose predictions decrease in tau are counted."""
        fit = fit_factory([(1.0, 0.0), (-1.0, 0.6)], (0.25, 0.75), c_L=-10.0, c_H=10.0)
        x = np.column_stack([[0.0, 0.1, 0.5, 1.0], np.ones(4)])

        assert crossing_fraction(fit, x) == pytest.approx(0.5)

    def test_no_crossing(self, censored_fit) -> None:
        """Parallel lines never cross."""
        assert crossing_fraction(censored_fit, X) == 0.0

    def test_censored_columns(self, censored_fit) -> None:
        """qcen and pcen prefixes produce per-quantile and probability columns."""
        predictions = build_predictions(censored_fit, X, qcen="myqcen", pcen="mypcen")

        assert list(predictions.columns) == [
            "myqcen_q20",
            "myqcen_q50",
            "myqcen_q80",
            "mypcen",
            "mypcen_s",
            "mypcen_lo",
            "mypcen_hi",
            "mypcen_lo_s",
            "mypcen_hi_s",
        ]
        assert predictions.m == 3
        assert predictions.pbw == censored_fit.bandwidth
        assert predictions.crossing_fraction == 0.0
        np.testing.assert_allclose(predictions.column("myqcen_q50"), [0.0, 0.2, 0.5, 1.0])

    def test_binary_columns(self, binary_fit) -> None:
        """The p1 prefix produces naive and smoothed columns."""
        predictions = build_predictions(binary_fit, X, p1="prob")

        assert set(predictions.columns) == {"prob", "prob_s"}
        assert predictions.crossing_fraction is None

    def test_binary_columns_with_probit(self, binary_fit) -> None:
        """A binary fit with Probit coefficients adds the {p1}_probit column."""
        fit = binary_fit.model_copy(update={"probit_beta": (0.8, -2.0)})

        predictions = build_predictions(fit, X, p1="prob")

        assert list(predictions.columns) == ["prob", "prob_s", "prob_probit"]
        np.testing.assert_allclose(
            predictions.column("prob_probit"), norm.cdf(0.8 * X[:, 0] - 2.0), rtol=1e-12
        )

    def test_pbwidth_from_spec(self, fit_factory) -> None:
        """The fit's probability bandwidth beats the estimation bandwidth."""
        fit = fit_factory([(1.0, -0.2), (1.0, 0.2)], (0.25, 0.75))
        fit = fit.model_copy(update={"spec": fit.spec.model_copy(update={"pbwidth": 0.05})})

        assert build_predictions(fit, X, pcen="p").pbw == 0.05
