"""Shared fixtures for quadosc tests."""

from __future__ import annotations

import math
from pathlib import Path
from typing import Callable

import numpy as np
import pytest

from quadosc.common.coefficients import CoefficientSet
from quadosc.common.grid import TimeGrid, make_grid
from quadosc.common.states import EnvelopeConvention, WaveguideParams
from quadosc.solver.integrator import IntegratorConfig


def sup_relative(actual: np.ndarray, expected: np.ndarray) -> float:
    """sup |actual - expected| / sup |expected|."""
    return float(np.max(np.abs(actual - expected)) / np.max(np.abs(expected)))


@pytest.fixture
def cfg() -> IntegratorConfig:
    """Default integrator settings."""
    return IntegratorConfig()


@pytest.fixture
def waveguide_params() -> WaveguideParams:
    """The reference waveguide: omega = 1, s = 0.1, hbar = 1."""
    return WaveguideParams(omega=1.0, s=0.1)


@pytest.fixture
def half_rate_params() -> WaveguideParams:
    """Reference waveguide with the half-rate envelope."""
    return WaveguideParams(omega=1.0, s=0.1, envelope=EnvelopeConvention.HALF_RATE)


@pytest.fixture
def waveguide_coeffs(waveguide_params: WaveguideParams) -> CoefficientSet:
    return CoefficientSet.waveguide(waveguide_params)


@pytest.fixture
def stationary_coeffs() -> CoefficientSet:
    """a = 1/2, b = 0, c = 1/2."""
    return CoefficientSet.stationary(1.0)


@pytest.fixture
def short_grid() -> TimeGrid:
    """[0, 10] sampled every 0.01."""
    return make_grid(0.0, 10.0, 0.01)


@pytest.fixture
def period_grid() -> TimeGrid:
    """Ten periods of the unit-frequency oscillator."""
    return make_grid(0.0, 20.0 * math.pi, 20.0 * math.pi / 2000)


@pytest.fixture
def write_config(tmp_path: Path) -> Callable[[str], str]:
    """Write a key=value config file and return its path."""

    def write(text: str) -> str:
        path = tmp_path / "run.cfg"
        path.write_text(text)
        return str(path)

    return write
