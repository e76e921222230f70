"""Second moments from the classical solution and first moments from invariant eigenvalues."""

from __future__ import annotations

import math

from ..common.coefficients import CoefficientSet
from ..common.errors import DomainError
from ..common.series import OscillatorSeries
from ..common.states import FluctuationRecord, OscillatorState, WaveguideParams
from .invariants import invariant_bracket


def _record(t: float, sigma_q2: float, sigma_p2: float, c_qp: float, hbar: float) -> FluctuationRecord:
    c_qp2 = c_qp * c_qp
    return FluctuationRecord(
        t=t,
        sigma_q2=sigma_q2,
        sigma_p2=sigma_p2,
        c_qp2=c_qp2,
        saturation_residual=sigma_q2 * sigma_p2 - c_qp2 - 0.25 * hbar * hbar,
        c_qp=c_qp,
    )


def fluctuations_from_rho(
    coeffs: CoefficientSet, rho: float, drho: float, hbar: float, t: float
) -> FluctuationRecord:
    """Variances and covariance of the invariant eigenstates.

    With X = b rho - drho/2 - (da/4a) rho:
    sigma_q^2 = hbar a rho^2, sigma_p^2 = (hbar/a)(1/(4 rho^2) + X^2) and
    c_qp = -hbar rho X.

    Raises:
        DomainError: If rho <= 0 or a(t) <= 0.
    """
    if not rho > 0:
        raise DomainError(f"rho must be positive, got {rho} at t={t}")
    v = coeffs.evaluate(t)
    x = invariant_bracket(v, rho, drho).real
    return _record(
        t,
        sigma_q2=hbar * v.a * rho * rho,
        sigma_p2=(hbar / v.a) * (0.25 / (rho * rho) + x * x),
        c_qp=-hbar * rho * x,
        hbar=hbar,
    )


def fluctuations_from_series(
    coeffs: CoefficientSet, series: OscillatorSeries, hbar: float
) -> list[FluctuationRecord]:
    rho = series.rho()
    drho = series.drho()
    return [
        fluctuations_from_rho(coeffs, float(rho[k]), float(drho[k]), hbar, float(series.t[k]))
        for k in range(len(series))
    ]


def squeeze_quadratures(params: WaveguideParams, t: float) -> tuple[float, float]:
    """(N, M) = (e^x cos^2 theta + e^{-x} sin^2 theta, e^x sin^2 theta + e^{-x} cos^2 theta).

    theta = omega t + pi/4 and x = 2 r t at the envelope rate r. N equals
    1 + 2 sinh^2(r t) - sinh(2 r t) sin(2 omega t) and M is the same with
    the sign of the sine flipped; both are sums of positive terms and N M is
    1 + sinh^2(2 r t) cos^2(2 omega t).
    """
    theta = params.omega * t + 0.25 * math.pi
    cos2, sin2 = math.cos(theta) ** 2, math.sin(theta) ** 2
    x = 2.0 * params.rate * t
    grow, decay = math.exp(x), math.exp(-x)
    return grow * cos2 + decay * sin2, grow * sin2 + decay * cos2


def squeeze_envelope(params: WaveguideParams, t: float) -> float:
    """N(t) = 1 + 2 sinh^2(r t) - sinh(2 r t) sin(2 omega t) at the envelope rate r."""
    return squeeze_quadratures(params, t)[0]


def waveguide_fluctuations_closed_form(params: WaveguideParams, t: float) -> FluctuationRecord:
    """Closed-form moments of the waveguide vacuum evolution.

    In the (q sqrt(omega), p / sqrt(omega)) frame the covariance is
    diag(e^x, e^{-x}) hbar/2 rotated by theta, so sigma_q^2 sigma_p^2 - c_qp^2
    is hbar^2/4 up to rounding relative to sigma_q^2 sigma_p^2.
    """
    w, hbar = params.omega, params.hbar
    n, m = squeeze_quadratures(params, t)
    return _record(
        t,
        sigma_q2=hbar / (2.0 * w) * n,
        sigma_p2=hbar * w / 2.0 * m,
        c_qp=-0.5 * hbar * math.sinh(2.0 * params.rate * t) * math.cos(2.0 * w * t),
        hbar=hbar,
    )


def first_moments(
    coeffs: CoefficientSet, state: OscillatorState, z: complex, hbar: float
) -> tuple[float, float]:
    """Means (q, p) in the eigenstate of the linear invariant with eigenvalue z.

    Raises:
        DomainError: If a(t) <= 0.
    """
    v = coeffs.evaluate(state.t)
    x = invariant_bracket(v, state.eps, state.deps)
    q = math.sqrt(hbar * v.a) * 2.0 * (z * state.eps.conjugate()).real
    p = -math.sqrt(hbar / v.a) * 2.0 * (z * x.conjugate()).real
    return q, p
