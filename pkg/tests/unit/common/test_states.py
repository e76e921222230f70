"""Tests for point states and waveguide parameters."""

from __future__ import annotations

import math

import pytest

from quadosc.common.errors import DomainError
from quadosc.common.states import EnvelopeConvention, OscillatorState, WaveguideParams


class TestOscillatorState:
    """Tests for OscillatorState."""

    def test_components(self) -> None:
        """Test eps1, eps2 and the polar amplitude."""
        state = OscillatorState(0.0, 3.0 + 4.0j, 1.0)
        assert (state.eps1, state.eps2) == (3.0, 4.0)
        assert state.rho == 5.0
        assert state.drho == pytest.approx(3.0 / 5.0)

    def test_drho_at_origin(self) -> None:
        """Test drho is rejected where eps vanishes."""
        with pytest.raises(DomainError):
            _ = OscillatorState(0.0, 0j, 1j).drho

    def test_scaled(self) -> None:
        """Test scaling multiplies eps and deps."""
        state = OscillatorState(1.0, 1.0, 1j).scaled(2j)
        assert state.eps == 2j
        assert state.deps == -2.0
        assert state.t == 1.0


class TestWaveguideParams:
    """Tests for WaveguideParams."""

    def test_rate_exact(self) -> None:
        """Test the exact envelope grows at 2s."""
        assert WaveguideParams(1.0, 0.1).rate == pytest.approx(0.2)

    def test_rate_half(self) -> None:
        """Test the half-rate envelope grows at s."""
        params = WaveguideParams(1.0, 0.1, envelope=EnvelopeConvention.HALF_RATE)
        assert params.rate == pytest.approx(0.1)

    @pytest.mark.parametrize(
        ("omega", "s", "hbar"),
        [
            (1.0, 0.5, 1.0),
            (1.0, 0.6, 1.0),
            (0.0, 0.0, 1.0),
            (1.0, -0.1, 1.0),
            (1.0, 0.1, 0.0),
            (math.nan, 0.1, 1.0),
        ],
    )
    def test_rejected(self, omega: float, s: float, hbar: float) -> None:
        """Test parameters outside 0 <= 2s < omega, hbar > 0 are rejected."""
        with pytest.raises(DomainError):
            WaveguideParams(omega, s, hbar)

    def test_stationary_limit_allowed(self) -> None:
        """Test s = 0 is a valid waveguide."""
        assert WaveguideParams(2.0, 0.0).rate == 0.0


class TestEnvelopeConvention:
    """Tests for EnvelopeConvention."""

    @pytest.mark.parametrize("name", ["exact", "EXACT", " Exact "])
    def test_exact_names(self, name: str) -> None:
        assert EnvelopeConvention.from_name(name) is EnvelopeConvention.EXACT

    def test_half_rate_name(self) -> None:
        """Test the CLI spelling maps to HALF_RATE."""
        assert EnvelopeConvention.from_name("half-rate") is EnvelopeConvention.HALF_RATE
        assert EnvelopeConvention.HALF_RATE.label == "half-rate"

    def test_unknown(self) -> None:
        with pytest.raises(DomainError):
            EnvelopeConvention.from_name("quarter")
