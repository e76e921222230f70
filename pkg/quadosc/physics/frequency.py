"""Frequency Omega^2(t) of the classical oscillator attached to a quadratic Hamiltonian.

The general form depends on a, b, c and the derivatives da, dda, db. For the
waveguide scenario the coefficients are

    a = 1/2 - (s/omega) cos(2 omega t)
    b = -s sin(2 omega t)
    c = omega^2/2 + s omega cos(2 omega t)

with analytic derivatives. Omega^2 may be negative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from ..common.coefficients import CoefficientSet, CoefficientValues, DerivativeMode, RealFn
from ..common.errors import DomainError, NonFiniteError
from ..common.states import WaveguideParams


@dataclass(frozen=True)
class FrequencyProfile:
    """Evaluable Omega^2(t)."""

    omega2: RealFn

    def __call__(self, t: float) -> float:
        value = self.omega2(t)
        if not math.isfinite(value):
            raise NonFiniteError(f"Omega^2 is not finite at t={t}")
        return value

    def sample(self, t: npt.NDArray[np.float64]) -> npt.NDArray[np.float64]:
        return np.array([self(float(x)) for x in t], dtype=np.float64)

    @classmethod
    def constant(cls, omega2: float) -> FrequencyProfile:
        return cls(lambda t: omega2)

    @classmethod
    def from_coefficients(cls, coeffs: CoefficientSet) -> FrequencyProfile:
        """Profile evaluating the general formula on coeffs."""
        return cls(lambda t: omega_squared_general(coeffs, t))


def omega_squared_from_values(v: CoefficientValues) -> float:
    """4ac + 2(da/a)b + dda/(2a) - 3da^2/(4a^2) - 4b^2 - 2db."""
    if not v.a > 0:
        raise DomainError(f"a(t) must be positive, got a({v.t}) = {v.a}")
    return (
        4.0 * v.a * v.c
        + 2.0 * (v.da / v.a) * v.b
        + v.dda / (2.0 * v.a)
        - 3.0 * v.da * v.da / (4.0 * v.a * v.a)
        - 4.0 * v.b * v.b
        - 2.0 * v.db
    )


def omega_squared_general(coeffs: CoefficientSet, t: float) -> float:
    """Omega^2(t) from arbitrary coefficients.

    Raises:
        DomainError: If a(t) <= 0 or a drive term is non-zero.
    """
    return omega_squared_from_values(coeffs.evaluate(t))


def waveguide_coefficients(params: WaveguideParams, t: float) -> tuple[float, float, float]:
    """(a, b, c) of the waveguide Hamiltonian at t."""
    w, s = params.omega, params.s
    cos2 = math.cos(2.0 * w * t)
    return 0.5 - (s / w) * cos2, -s * math.sin(2.0 * w * t), 0.5 * w * w + s * w * cos2


def waveguide_derivatives(params: WaveguideParams, t: float) -> tuple[float, float, float]:
    """Analytic (da, dda, db) of the waveguide coefficients at t."""
    w, s = params.omega, params.s
    cos2 = math.cos(2.0 * w * t)
    return 2.0 * s * math.sin(2.0 * w * t), 4.0 * s * w * cos2, -2.0 * s * w * cos2


def waveguide_coefficient_set(params: WaveguideParams) -> CoefficientSet:
    """Waveguide coefficients with analytic derivatives."""
    return CoefficientSet(
        a=lambda t: waveguide_coefficients(params, t)[0],
        b=lambda t: waveguide_coefficients(params, t)[1],
        c=lambda t: waveguide_coefficients(params, t)[2],
        da=lambda t: waveguide_derivatives(params, t)[0],
        dda=lambda t: waveguide_derivatives(params, t)[1],
        db=lambda t: waveguide_derivatives(params, t)[2],
        derivative_mode=DerivativeMode.ANALYTIC,
    )


def waveguide_denominator(params: WaveguideParams, t: float) -> float:
    """D(t) = omega - 2s cos(2 omega t) = 2 omega a(t)."""
    return params.omega - 2.0 * params.s * math.cos(2.0 * params.omega * t)


def waveguide_omega_squared(params: WaveguideParams, t: float) -> float:
    """Closed-form Omega^2(t) of the waveguide.

    Raises:
        DomainError: If the denominator omega - 2s cos(2 omega t) is not positive.
    """
    w, s = params.omega, params.s
    cos2 = math.cos(2.0 * w * t)
    sin2 = math.sin(2.0 * w * t)
    d = waveguide_denominator(params, t)
    if not d > 0:
        raise DomainError(f"omega - 2s cos(2 omega t) = {d} at t={t}; need 2s < omega")
    return (
        w * w
        - 4.0 * s * s
        + 4.0 * s * w * cos2
        + (4.0 * s * w * w * cos2 - 8.0 * s * s * w * sin2 * sin2) / d
        - 12.0 * s * s * w * w * sin2 * sin2 / (d * d)
    )


def waveguide_frequency_profile(params: WaveguideParams) -> FrequencyProfile:
    return FrequencyProfile(lambda t: waveguide_omega_squared(params, t))
