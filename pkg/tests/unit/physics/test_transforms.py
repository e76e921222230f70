"""Tests for the maps between equation forms."""

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quadosc.common.coefficients import CoefficientSet
from quadosc.common.errors import DegenerateTransformError, DomainError
from quadosc.common.grid import TimeGrid, make_grid
from quadosc.common.series import ErmakovSeries, HamiltonPairSeries, OscillatorSeries, RiccatiSeries
from quadosc.common.states import OscillatorState, WaveguideParams
from quadosc.physics.fluctuations import fluctuations_from_rho
from quadosc.physics.frequency import FrequencyProfile, waveguide_frequency_profile
from quadosc.physics.transforms import (
    coeffs_to_riccati,
    effective_frequency_from_mass,
    epsilon_to_ermakov,
    epsilon_to_mass,
    epsilon_to_riccati,
    ermakov_to_epsilon,
    hamilton_pair_from_epsilon,
    hamilton_pair_sample_residual,
    hamilton_pair_series_from_epsilon,
    hamilton_pair_to_epsilon,
    mass_series_to_epsilon,
    mass_to_epsilon,
    polar_to_epsilon_samples,
    propagation_residual,
    riccati_from_samples,
    riccati_functions,
    riccati_residual_to_oscillator,
    riccati_to_epsilon,
)
from quadosc.physics.waveguide import closed_form_epsilon, closed_form_series
from quadosc.solver.dynamics import integrate_oscillator, integrate_riccati
from quadosc.solver.integrator import IntegratorConfig


def _stationary_riccati(omega: float, grid: TimeGrid, cfg: IntegratorConfig) -> RiccatiSeries:
    a1p, a2p, a3p, da3p = riccati_functions(CoefficientSet.stationary(omega))
    return integrate_riccati(a1p, a2p, a3p, 1j * omega, grid, cfg, da3p=da3p)


class TestCoeffsToRiccati:
    """Tests for coeffs_to_riccati()."""

    def test_stationary(self) -> None:
        assert coeffs_to_riccati(CoefficientSet.stationary(2.0), 0.5) == pytest.approx((-4.0, 0.0, -1.0))

    def test_waveguide(self, waveguide_coeffs: CoefficientSet) -> None:
        assert coeffs_to_riccati(waveguide_coeffs, 0.0) == pytest.approx((-1.2, 0.0, -0.8))

    def test_zero(self) -> None:
        zero = CoefficientSet(a=lambda t: 0.0, b=lambda t: 0.0, c=lambda t: 0.0)
        assert coeffs_to_riccati(zero, 1.0) == (-0.0, -0.0, -0.0)


class TestRiccatiToEpsilon:
    """Tests for riccati_to_epsilon() and epsilon_to_riccati()."""

    @pytest.mark.parametrize("m0omega0", [1.5, 3.0])
    def test_fixed_point_solves_oscillator(self, cfg: IntegratorConfig, m0omega0: float) -> None:
        """Test the map of c1 = i omega propagates as an oscillator solution."""
        omega = 1.5
        grid = make_grid(0.0, 8.0, 0.05)
        eps = riccati_to_epsilon(_stationary_riccati(omega, grid, cfg), m0omega0)
        assert propagation_residual(eps, FrequencyProfile.constant(omega**2), cfg) < 1e-8

    def test_fixed_point_residual_column(self, cfg: IntegratorConfig) -> None:
        grid = make_grid(0.0, 4.0, 0.1)
        riccati = _stationary_riccati(1.0, grid, cfg)
        assert float(np.max(np.abs(riccati_residual_to_oscillator(riccati)))) < 1e-8

    def test_waveguide_round_trip(
        self, cfg: IntegratorConfig, waveguide_params: WaveguideParams, waveguide_coeffs: CoefficientSet
    ) -> None:
        """Test c1 built from eps is reproduced by integrating the Riccati equation."""
        grid = make_grid(0.0, 5.0, 0.01)
        eps = closed_form_series(waveguide_params, grid)
        sampled = epsilon_to_riccati(waveguide_coeffs, eps, cfg)
        a1p, a2p, a3p, da3p = riccati_functions(waveguide_coeffs)
        integrated = integrate_riccati(a1p, a2p, a3p, complex(sampled.c1[0]), grid, cfg, da3p=da3p)
        scale = float(np.max(np.abs(sampled.c1)))
        assert float(np.max(np.abs(integrated.c1 - sampled.c1))) < 1e-7 * scale

    def test_waveguide_map_back(
        self, cfg: IntegratorConfig, waveguide_params: WaveguideParams, waveguide_coeffs: CoefficientSet
    ) -> None:
        """Test eps -> c1 -> eps gives another oscillator solution."""
        grid = make_grid(0.0, 5.0, 0.01)
        sampled = epsilon_to_riccati(waveguide_coeffs, closed_form_series(waveguide_params, grid), cfg)
        back = riccati_to_epsilon(sampled)
        assert propagation_residual(back, waveguide_frequency_profile(waveguide_params), cfg) < 1e-7

    def test_from_samples_matches_exact_coefficients(
        self, cfg: IntegratorConfig, waveguide_params: WaveguideParams, waveguide_coeffs: CoefficientSet
    ) -> None:
        """Test sampled coefficients give the same running integrals as the coefficient functions."""
        grid = make_grid(0.0, 5.0, 0.01)
        exact = epsilon_to_riccati(waveguide_coeffs, closed_form_series(waveguide_params, grid), cfg)
        sampled = riccati_from_samples(exact.t, exact.c1, exact.a1p, exact.a2p, exact.a3p, exact.da3p, cfg)
        for name in ("c2", "c3", "k2", "k3"):
            np.testing.assert_allclose(getattr(sampled, name), getattr(exact, name), atol=1e-8)
        back = riccati_to_epsilon(sampled)
        assert propagation_residual(back, waveguide_frequency_profile(waveguide_params), cfg) < 1e-7

    def test_from_samples_stationary_integrals(self, cfg: IntegratorConfig) -> None:
        """Test c1 = i gives c2 = -i t and k2 = -2i t for a1' = a3' = -1."""
        t = np.linspace(0.0, 3.0, 31)
        ones = np.ones_like(t)
        series = riccati_from_samples(t, 1j * ones, -ones, 0 * ones, -ones, 0 * ones, cfg)
        np.testing.assert_allclose(series.c2, -1j * t, atol=1e-10)
        np.testing.assert_allclose(series.k2, -2j * t, atol=1e-10)
        np.testing.assert_allclose(series.k3, (np.exp(-2j * t) - 1.0) / 2j, atol=1e-9)

    @pytest.mark.parametrize("t", [np.array([0.0]), np.array([0.0, 1.0, 1.0])])
    def test_from_samples_needs_increasing_times(self, t: np.ndarray) -> None:
        values = np.ones_like(t)
        with pytest.raises(DomainError):
            riccati_from_samples(t, 1j * values, -values, 0 * values, -values, 0 * values)

    def test_vanishing_a3p(self) -> None:
        t = np.linspace(0.0, 1.0, 5)
        zeros = np.zeros_like(t)
        series = riccati_from_samples(t, zeros + 1j, zeros - 1.0, zeros, zeros, zeros)
        with pytest.raises(DegenerateTransformError):
            riccati_to_epsilon(series)

    def test_non_positive_normalization(self, cfg: IntegratorConfig) -> None:
        series = _stationary_riccati(1.0, make_grid(0.0, 1.0, 0.1), cfg)
        with pytest.raises(DomainError):
            riccati_to_epsilon(series, 0.0)


class TestMass:
    """Tests for the time-dependent mass form."""

    def test_unit_mass_is_identity(self) -> None:
        assert mass_to_epsilon(0.3, -1.2, 1.0, 0.0, 0.0) == pytest.approx((0.3, -1.2))

    def test_constant_scaling(self) -> None:
        assert mass_to_epsilon(1.0, 0.0, 4.0, 0.0, 0.0) == pytest.approx((2.0, 0.0))

    def test_inverse(self) -> None:
        eps, deps = mass_to_epsilon(0.7, 0.2, 2.5, -0.4, 1.0)
        assert epsilon_to_mass(eps, deps, 2.5, -0.4) == pytest.approx((0.7, 0.2))

    @pytest.mark.parametrize("m", [0.0, -1.0, math.nan])
    def test_non_positive_mass(self, m: float) -> None:
        with pytest.raises(DegenerateTransformError):
            mass_to_epsilon(1.0, 0.0, m, 0.0, 0.0)

    def test_degenerate_is_domain_error(self) -> None:
        with pytest.raises(DomainError):
            effective_frequency_from_mass(1.0, 0.0, 0.0, 0.0)

    def test_effective_frequency_constant_mass(self) -> None:
        assert effective_frequency_from_mass(2.0, 3.0, 0.0, 0.0) == 2.0

    def test_effective_frequency_exponential_mass(self) -> None:
        """Test m = e^{2 gamma t} gives omega^2 - gamma^2."""
        gamma, t = 0.3, 0.8
        m = math.exp(2 * gamma * t)
        value = effective_frequency_from_mass(1.0, m, 2 * gamma * m, 4 * gamma**2 * m)
        assert value == pytest.approx(1.0 - gamma**2)

    def test_effective_frequency_quadratic_mass(self) -> None:
        """Test m = 1 + t^2 at t = 0."""
        assert effective_frequency_from_mass(1.0, 1.0, 0.0, 2.0) == pytest.approx(0.0)

    def test_damped_oscillator(self, cfg: IntegratorConfig) -> None:
        """Test the damped solution f = e^{-gamma t} cos(w t) maps onto an oscillator solution."""
        gamma, omega = 0.2, 1.0
        w = math.sqrt(omega**2 - gamma**2)
        t = np.linspace(0.0, 6.0, 601)
        f = np.exp(-gamma * t) * np.cos(w * t)
        df = -gamma * f - w * np.exp(-gamma * t) * np.sin(w * t)
        m = np.exp(2 * gamma * t)
        series = mass_series_to_epsilon(t, f, df, m, 2 * gamma * m)
        np.testing.assert_allclose(series.eps.real, np.cos(w * t), atol=1e-12)
        freq = FrequencyProfile.constant(omega**2 - gamma**2)
        assert propagation_residual(series, freq, cfg) < 1e-8


class TestHamiltonPair:
    """Tests for the Hamilton-pair form."""

    def test_stationary_ground(self, stationary_coeffs: CoefficientSet) -> None:
        state = hamilton_pair_from_epsilon(stationary_coeffs, OscillatorState(1.0, 1j, -1.0), 1.0)
        assert state.sigma == pytest.approx(math.sqrt(0.5))
        assert state.pi == pytest.approx(0.0, abs=1e-15)

    def test_waveguide_start(self, waveguide_params: WaveguideParams, waveguide_coeffs: CoefficientSet) -> None:
        state = hamilton_pair_from_epsilon(waveguide_coeffs, closed_form_epsilon(waveguide_params, 0.0), 1.0)
        assert state.sigma == pytest.approx(math.sqrt(0.5))
        assert state.pi == pytest.approx(0.0, abs=1e-12)

    def test_sigma_squared_is_position_variance(self, waveguide_coeffs: CoefficientSet) -> None:
        state = OscillatorState(0.9, 1.1 - 0.4j, 0.2 + 0.8j)
        pair = hamilton_pair_from_epsilon(waveguide_coeffs, state, 1.0)
        rec = fluctuations_from_rho(waveguide_coeffs, state.rho, state.drho, 1.0, 0.9)
        assert pair.sigma**2 == pytest.approx(rec.sigma_q2)
        assert pair.pi * pair.sigma == pytest.approx(rec.c_qp)

    def test_round_trip(
        self, cfg: IntegratorConfig, waveguide_params: WaveguideParams, waveguide_coeffs: CoefficientSet
    ) -> None:
        """Test eps -> (sigma, Pi) -> eps recovers an oscillator solution with the same modulus."""
        grid = make_grid(0.0, 10.0, 0.01)
        eps = integrate_oscillator(
            waveguide_frequency_profile(waveguide_params), closed_form_epsilon(waveguide_params, 0.0), grid, cfg
        )
        pair = hamilton_pair_series_from_epsilon(waveguide_coeffs, eps, 1.0)
        back = hamilton_pair_to_epsilon(waveguide_coeffs, pair, 1.0, cfg)
        np.testing.assert_allclose(back.rho(), eps.rho(), rtol=1e-10)
        assert propagation_residual(back, waveguide_frequency_profile(waveguide_params), cfg) < 1e-7

    def test_sample_residual(self, cfg: IntegratorConfig, stationary_coeffs: CoefficientSet) -> None:
        t = np.linspace(0.0, 2.0, 21)
        pair = HamiltonPairSeries(t, np.full_like(t, math.sqrt(0.5)), np.zeros_like(t))
        residual = hamilton_pair_sample_residual(stationary_coeffs, pair, 1.0)
        np.testing.assert_allclose(residual, 0.0, atol=1e-12)

    def test_non_positive_sigma(self, stationary_coeffs: CoefficientSet) -> None:
        t = np.linspace(0.0, 1.0, 3)
        pair = HamiltonPairSeries(t, np.zeros_like(t), np.zeros_like(t))
        with pytest.raises(DomainError):
            hamilton_pair_to_epsilon(stationary_coeffs, pair, 1.0)


class TestErmakov:
    """Tests for the Ermakov form."""

    @pytest.mark.parametrize("step", [0.01, 0.1])
    def test_round_trip(self, waveguide_params: WaveguideParams, cfg: IntegratorConfig, step: float) -> None:
        """Test eps -> rho -> eps recovers the closed form whatever the sample spacing."""
        grid = make_grid(0.0, 10.0, step)
        eps = closed_form_series(waveguide_params, grid)
        back = ermakov_to_epsilon(epsilon_to_ermakov(eps), waveguide_frequency_profile(waveguide_params), cfg)
        np.testing.assert_allclose(back.eps, eps.eps, atol=1e-8)
        assert propagation_residual(back, waveguide_frequency_profile(waveguide_params), cfg) < 1e-7

    @given(omega=st.floats(min_value=0.3, max_value=3.0), step=st.sampled_from([0.05, 0.2, 0.5]))
    @settings(max_examples=20, deadline=None)
    def test_stationary_round_trip(self, omega: float, step: float) -> None:
        """Test rho = omega^{-1/2} maps back to e^{i omega t} / sqrt(omega) on any grid."""
        t = make_grid(0.0, 6.0, step).points()
        rho = np.full_like(t, 1.0 / math.sqrt(omega))
        series = ErmakovSeries(t, rho, np.zeros_like(t))
        back = ermakov_to_epsilon(series, FrequencyProfile.constant(omega**2), IntegratorConfig())
        np.testing.assert_allclose(back.eps, np.exp(1j * omega * t) / math.sqrt(omega), atol=1e-9)

    def test_given_phase_is_used(self) -> None:
        t = np.linspace(0.0, 1.0, 5)
        series = polar_to_epsilon_samples(t, np.ones_like(t), np.zeros_like(t), phase=2.0 * t)
        np.testing.assert_allclose(series.eps, np.exp(2j * t))

    def test_repeated_time(self, stationary_coeffs: CoefficientSet) -> None:
        t = np.array([0.0, 0.5, 0.5, 1.0])
        with pytest.raises(DomainError):
            ermakov_to_epsilon(ErmakovSeries(t, np.ones(4), np.zeros(4)), FrequencyProfile.constant(1.0))
        with pytest.raises(DomainError):
            hamilton_pair_to_epsilon(stationary_coeffs, HamiltonPairSeries(t, np.ones(4), np.zeros(4)), 1.0)

    def test_non_positive_rho(self) -> None:
        t = np.linspace(0.0, 1.0, 3)
        series = OscillatorSeries(t, np.array([1.0, 0.0, 1.0], dtype=complex), np.ones(3, dtype=complex))
        with pytest.raises(DomainError):
            epsilon_to_ermakov(series)


class TestPropagationResidual:
    """Tests for propagation_residual()."""

    def test_exact_series(self, cfg: IntegratorConfig) -> None:
        t = np.linspace(0.0, 10.0, 101)
        eps = np.exp(1j * t)
        series = OscillatorSeries(t, eps, 1j * eps)
        assert propagation_residual(series, FrequencyProfile.constant(1.0), cfg) < 1e-8

    def test_wrong_frequency(self, cfg: IntegratorConfig) -> None:
        t = np.linspace(0.0, 10.0, 101)
        eps = np.exp(1j * t)
        series = OscillatorSeries(t, eps, 1j * eps)
        assert propagation_residual(series, FrequencyProfile.constant(1.21), cfg) > 0.1
