"""Tests for the coefficient model and finite differences."""

from __future__ import annotations

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quadosc.common.coefficients import (
    CoefficientSet,
    DerivativeMode,
    default_fd_step,
    finite_difference_derivatives,
)
from quadosc.common.errors import DomainError, NonFiniteError
from quadosc.common.states import WaveguideParams


class TestFiniteDifferenceDerivatives:
    """Tests for finite_difference_derivatives()."""

    def test_square(self) -> None:
        """Test t^2 at t=1 with h=1e-4."""
        first, second = finite_difference_derivatives(lambda t: t * t, 1.0, 1e-4)
        assert first == pytest.approx(2.0, abs=1e-6)
        assert second == pytest.approx(2.0, abs=1e-4)

    def test_constant(self) -> None:
        """Test a constant has zero derivatives."""
        first, second = finite_difference_derivatives(lambda t: 3.0, 0.7)
        assert first == 0.0
        assert second == 0.0

    def test_cosine(self) -> None:
        """Test cos(2t) at 0 with the default step."""
        first, second = finite_difference_derivatives(lambda t: math.cos(2 * t), 0.0)
        assert first == pytest.approx(0.0, abs=1e-12)
        assert second == pytest.approx(-4.0, abs=1e-8)

    @given(t=st.floats(min_value=-1.0, max_value=1.0), w=st.floats(min_value=0.1, max_value=3.0))
    @settings(max_examples=50)
    def test_sine_accuracy(self, t: float, w: float) -> None:
        """Test sin(wt) derivatives against the analytic values."""
        first, second = finite_difference_derivatives(lambda x: math.sin(w * x), t)
        assert first == pytest.approx(w * math.cos(w * t), abs=1e-8)
        assert second == pytest.approx(-w * w * math.sin(w * t), abs=1e-6)

    def test_cubic_is_exact(self) -> None:
        """Test the five-point stencil is exact on cubics up to roundoff."""
        first, second = finite_difference_derivatives(lambda t: t**3 - 2 * t, 2.0, 1e-2)
        assert first == pytest.approx(10.0, abs=1e-10)
        assert second == pytest.approx(12.0, abs=1e-8)

    def test_non_positive_step(self) -> None:
        """Test h <= 0 is rejected."""
        with pytest.raises(DomainError):
            finite_difference_derivatives(math.sin, 0.0, 0.0)

    def test_non_finite_value(self) -> None:
        """Test NaN function values propagate as an error."""
        with pytest.raises(NonFiniteError):
            finite_difference_derivatives(lambda t: math.nan, 0.0)

    def test_default_step_scales_with_t(self) -> None:
        """Test the default step grows with |t| past the floor."""
        assert default_fd_step(0.0) == 1e-3
        assert default_fd_step(-100.0) == pytest.approx(0.1)


class TestCoefficientSet:
    """Tests for CoefficientSet."""

    def test_stationary_values(self) -> None:
        """Test the stationary set evaluates to constants with zero derivatives."""
        v = CoefficientSet.stationary(2.0).evaluate(1.3)
        assert (v.a, v.b, v.c) == (0.5, 0.0, 2.0)
        assert (v.da, v.dda, v.db) == (0.0, 0.0, 0.0)

    def test_non_positive_a(self) -> None:
        """Test a(t) <= 0 is a domain error."""
        coeffs = CoefficientSet(a=lambda t: -1.0, b=lambda t: 0.0, c=lambda t: 1.0)
        with pytest.raises(DomainError):
            coeffs.evaluate(0.0)

    def test_drive_term_rejected(self) -> None:
        """Test non-zero d, e, f are rejected."""
        coeffs = CoefficientSet(
            a=lambda t: 0.5, b=lambda t: 0.0, c=lambda t: 0.5, e=lambda t: 1.0
        )
        with pytest.raises(DomainError, match="drive term e"):
            coeffs.evaluate(0.0)

    def test_analytic_mode_needs_closures(self) -> None:
        """Test analytic mode without derivative closures is rejected."""
        with pytest.raises(DomainError):
            CoefficientSet(
                a=lambda t: 0.5,
                b=lambda t: 0.0,
                c=lambda t: 0.5,
                derivative_mode=DerivativeMode.ANALYTIC,
            )

    @given(t=st.floats(min_value=0.0, max_value=1.0))
    @settings(max_examples=50)
    def test_finite_differences_match_analytic(self, t: float) -> None:
        """Test finite-difference derivatives of the waveguide set agree with the closures."""
        analytic = CoefficientSet.waveguide(WaveguideParams(1.0, 0.2))
        numeric = analytic.with_finite_differences()
        a = analytic.evaluate(t)
        n = numeric.evaluate(t)
        assert n.da == pytest.approx(a.da, abs=1e-9)
        assert n.dda == pytest.approx(a.dda, abs=1e-7)
        assert n.db == pytest.approx(a.db, abs=1e-9)
