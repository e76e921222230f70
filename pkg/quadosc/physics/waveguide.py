"""Closed-form solution of the waveguide scenario and its cross-validation.

The closed form is eps = rho e^{i phi} with rho^2 = N/D and phi the integral
of D/N, where D = omega - 2s cos(2 omega t) and N is the squeeze envelope
(see fluctuations.squeeze_envelope). With theta = omega t + pi/4 and
x = 2 r t at envelope rate r, N = e^x cos^2(theta) + e^{-x} sin^2(theta) is
|zeta|^2 for the phasor zeta = e^{rt} cos(theta) + i e^{-rt} sin(theta), and
d(arg zeta)/dt = (omega - r cos(2 omega t)) / N. The phase is arg zeta plus
(r - 2s) times the integral of cos(2 omega t) / N, which vanishes for the
exact envelope and is integrated by quadrature otherwise.
"""

from __future__ import annotations

import asyncio
import logging
import math
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt
from scipy.integrate import quad

from ..common.constants import (
    DEFAULT_QUAD_TOL,
    QUAD_ACCEPT_REL,
    QUAD_SUBDIVISION_LIMIT,
    STRICT_FACTOR,
    TOL_FLUCT,
    TOL_ODE,
    TOL_OMEGA,
    TOL_SATURATION,
    TOL_WRONSKIAN,
)
from ..common.coefficients import CoefficientSet
from ..common.errors import DomainError, QuadratureError
from ..common.grid import TimeGrid
from ..common.series import OscillatorSeries
from ..common.states import FluctuationRecord, OscillatorState, WaveguideParams
from ..solver.dynamics import integrate_oscillator
from ..solver.integrator import IntegratorConfig
from .fluctuations import fluctuations_from_series, waveguide_fluctuations_closed_form
from .frequency import (
    omega_squared_general,
    waveguide_coefficient_set,
    waveguide_frequency_profile,
    waveguide_omega_squared,
)
from .invariants import relative_saturation_residual

logger = logging.getLogger(__name__)

FloatArray = npt.NDArray[np.float64]


def _envelope(params: WaveguideParams, t: FloatArray) -> tuple[FloatArray, ...]:
    """N, dN/dt, D, dD/dt at t."""
    w, s, r = params.omega, params.s, params.rate
    theta = w * t + 0.25 * np.pi
    cos_t, sin_t = np.cos(theta), np.sin(theta)
    grow, decay = np.exp(2.0 * r * t), np.exp(-2.0 * r * t)
    n = grow * cos_t**2 + decay * sin_t**2
    dn = 2.0 * r * (grow * cos_t**2 - decay * sin_t**2) - 2.0 * w * cos_t * sin_t * (grow - decay)
    d = w - 2.0 * s * np.cos(2.0 * w * t)
    dd = 4.0 * s * w * np.sin(2.0 * w * t)
    return n, dn, d, dd


def _rotating_phase(params: WaveguideParams, t: FloatArray) -> FloatArray:
    """arg zeta(t) - arg zeta(0), continuous in t."""
    theta = params.omega * t + 0.25 * np.pi
    squeezed = np.arctan2(np.exp(-2.0 * params.rate * t) * np.sin(theta), np.cos(theta))
    # zeta stays in the quadrant of theta, so the offset is within (-pi/2, pi/2)
    offset = np.remainder(squeezed - theta + np.pi, 2.0 * np.pi) - np.pi
    return np.asarray(params.omega * t + offset, dtype=np.float64)


def _mismatch_weight(params: WaveguideParams) -> float:
    return params.rate - 2.0 * params.s


def _mismatch_panel(params: WaveguideParams, t0: float, t1: float, quad_tol: float) -> float:
    """Integral of cos(2 omega t) / N over [t0, t1], split at the peaks of 1/N."""
    if t1 == t0:
        return 0.0
    w = params.omega

    def integrand(tau: float) -> float:
        n = _envelope(params, np.asarray(tau))[0]
        return float(np.cos(2.0 * w * tau) / n)

    # 1/N peaks where cos(theta) = 0
    first = math.ceil((w * t0 - 0.25 * math.pi) / math.pi)
    last = math.floor((w * t1 - 0.25 * math.pi) / math.pi)
    peaks = [(0.25 * math.pi + k * math.pi) / w for k in range(first, last + 1)]
    peaks = [p for p in peaks if t0 < p < t1]
    value, abserr, _info, *message = quad(
        integrand,
        t0,
        t1,
        epsabs=quad_tol,
        epsrel=quad_tol,
        limit=max(QUAD_SUBDIVISION_LIMIT, 4 * len(peaks)),
        points=peaks or None,
        full_output=1,
    )
    if message:
        if abserr > max(quad_tol, QUAD_ACCEPT_REL * abs(value)):
            raise QuadratureError(f"phase integral on [{t0}, {t1}] failed: {message[0]}")
        logger.debug("phase integral on [%g, %g]: %s (error %.2e accepted)", t0, t1, message[0], abserr)
    return float(value)


def _assemble(params: WaveguideParams, t: FloatArray, phase: FloatArray) -> tuple[FloatArray, ...]:
    n, dn, d, dd = _envelope(params, t)
    rho = np.sqrt(n / d)
    drho = (dn * d - n * dd) / (2.0 * rho * d * d)
    rotation = np.exp(1j * phase)
    return rho * rotation, (drho + 1j / rho) * rotation


def closed_form_epsilon(
    params: WaveguideParams, t: float, quad_tol: float = DEFAULT_QUAD_TOL
) -> OscillatorState:
    """Closed-form eps and deps at t >= 0, normalized to W = 2i.

    Raises:
        DomainError: If t < 0.
        QuadratureError: If the phase integral does not converge.
    """
    if not (math.isfinite(t) and t >= 0):
        raise DomainError(f"closed form needs t >= 0, got {t}")
    times = np.array([t])
    phase = _rotating_phase(params, times)
    weight = _mismatch_weight(params)
    if weight != 0.0:
        phase = phase + weight * _mismatch_panel(params, 0.0, t, quad_tol)
    eps, deps = _assemble(params, times, phase)
    return OscillatorState(t, complex(eps[0]), complex(deps[0]))


def closed_form_series(
    params: WaveguideParams, grid: TimeGrid, quad_tol: float = DEFAULT_QUAD_TOL
) -> OscillatorSeries:
    """Closed form on every grid point; any quadrature is chained panel by panel."""
    if grid.t_start < 0:
        raise DomainError(f"closed form needs t >= 0, got t_start={grid.t_start}")
    t = grid.points()
    phase = _rotating_phase(params, t)
    weight = _mismatch_weight(params)
    if weight != 0.0:
        panels = np.empty(len(t))
        panels[0] = _mismatch_panel(params, 0.0, float(t[0]), quad_tol)
        for k in range(1, len(t)):
            panels[k] = _mismatch_panel(params, float(t[k - 1]), float(t[k]), quad_tol)
        logger.debug("closed form: %d phase panels", len(t))
        phase = phase + weight * np.cumsum(panels)
    eps, deps = _assemble(params, t, phase)
    return OscillatorSeries(t, np.asarray(eps), np.asarray(deps))


@dataclass(frozen=True)
class ValidationTolerances:
    """Pass thresholds of the cross-validation checks."""

    ode: float = TOL_ODE
    wronskian: float = TOL_WRONSKIAN
    fluct: float = TOL_FLUCT
    omega: float = TOL_OMEGA
    saturation: float = TOL_SATURATION

    def strict(self) -> ValidationTolerances:
        """Every tolerance tightened by STRICT_FACTOR."""
        return ValidationTolerances(
            ode=self.ode * STRICT_FACTOR,
            wronskian=self.wronskian * STRICT_FACTOR,
            fluct=self.fluct * STRICT_FACTOR,
            omega=self.omega * STRICT_FACTOR,
            saturation=self.saturation * STRICT_FACTOR,
        )


@dataclass(frozen=True)
class CheckResult:
    """Worst value of one check and the time it occurs."""

    value: float
    t_worst: float


@dataclass(frozen=True)
class ValidationReport:
    params: WaveguideParams
    tolerances: ValidationTolerances
    ode: CheckResult
    wronskian: CheckResult
    fluct: CheckResult
    saturation: CheckResult
    omega: CheckResult

    @property
    def max_ode_residual(self) -> float:
        return self.ode.value

    @property
    def max_wronskian_drift(self) -> float:
        return self.wronskian.value

    @property
    def max_fluct_mismatch(self) -> float:
        return self.fluct.value

    @property
    def max_saturation_residual(self) -> float:
        return self.saturation.value

    @property
    def max_omega_consistency(self) -> float:
        return self.omega.value

    @property
    def failures(self) -> tuple[str, ...]:
        """Names of the checks at or above their tolerance."""
        return tuple(name for name, result, tol in self.checks() if not result.value < tol)

    @property
    def passed(self) -> bool:
        return not self.failures

    def checks(self) -> list[tuple[str, CheckResult, float]]:
        """(name, result, tolerance) per check, in report order."""
        tol = self.tolerances
        return [
            ("ode", self.ode, tol.ode),
            ("wronskian", self.wronskian, tol.wronskian),
            ("fluct", self.fluct, tol.fluct),
            ("saturation", self.saturation, tol.saturation),
            ("omega", self.omega, tol.omega),
        ]

    def to_lines(self) -> list[str]:
        """key=value rendering; floats use their shortest round-trip form."""
        p = self.params
        lines = [
            f"passed={'true' if self.passed else 'false'}",
            f"omega={p.omega!r}",
            f"s={p.s!r}",
            f"hbar={p.hbar!r}",
            f"envelope={p.envelope.label}",
        ]
        for name, result, tolerance in self.checks():
            lines.append(f"{_METRIC_KEYS[name]}={result.value!r}")
            lines.append(f"t_worst_{name}={result.t_worst!r}")
            lines.append(f"tol_{name}={tolerance!r}")
        lines.append(f"failures={','.join(self.failures)}")
        return lines


_METRIC_KEYS = {
    "ode": "max_ode_residual",
    "wronskian": "max_wronskian_drift",
    "fluct": "max_fluct_mismatch",
    "saturation": "max_saturation_residual",
    "omega": "max_omega_consistency",
}


def _worst(values: FloatArray, t: FloatArray) -> CheckResult:
    if not np.all(np.isfinite(values)):
        k = int(np.argmax(~np.isfinite(values)))
        return CheckResult(math.inf, float(t[k]))
    k = int(np.argmax(values))
    return CheckResult(float(values[k]), float(t[k]))


def ode_check(numeric: OscillatorSeries, closed: OscillatorSeries) -> CheckResult:
    """sup |eps_num - eps_cf| relative to sup |eps_cf|."""
    deviation = np.abs(numeric.eps - closed.eps) / float(np.max(np.abs(closed.eps)))
    return _worst(deviation, numeric.t)


def fluct_check(
    numeric: list[FluctuationRecord], closed: list[FluctuationRecord], params: WaveguideParams
) -> CheckResult:
    """Worst relative mismatch over sigma_q^2, sigma_p^2 and c_qp^2."""
    w, hbar = params.omega, params.hbar
    t = np.array([r.t for r in closed])
    floors = {"sigma_q2": hbar / (2.0 * w), "sigma_p2": hbar * w / 2.0, "c_qp2": hbar * hbar / 4.0}
    worst = CheckResult(0.0, float(t[0]))
    for name, floor in floors.items():
        num = np.array([getattr(r, name) for r in numeric])
        ref = np.array([getattr(r, name) for r in closed])
        scale = max(float(np.max(np.abs(ref))), floor)
        result = _worst(np.abs(num - ref) / scale, t)
        if result.value > worst.value:
            worst = result
    return worst


def saturation_check(records: list[FluctuationRecord], hbar: float) -> CheckResult:
    values = np.array([relative_saturation_residual(r, hbar) for r in records])
    return _worst(values, np.array([r.t for r in records]))


def omega_check(params: WaveguideParams, coeffs: CoefficientSet, t: FloatArray) -> CheckResult:
    """General frequency formula on the waveguide coefficients against the closed form."""
    scale = max(1.0, params.omega**2)
    values = np.array(
        [
            abs(omega_squared_general(coeffs, float(x)) - waveguide_omega_squared(params, float(x)))
            for x in t
        ]
    )
    return _worst(values / scale, t)


async def _run_checks(
    params: WaveguideParams,
    grid: TimeGrid,
    cfg: IntegratorConfig,
    closed: OscillatorSeries,
) -> tuple[OscillatorSeries, CheckResult, list[FluctuationRecord]]:
    coeffs = waveguide_coefficient_set(params)
    t = grid.points()
    numeric, omega_result, closed_records = await asyncio.gather(
        asyncio.to_thread(
            integrate_oscillator, waveguide_frequency_profile(params), closed[0], grid, cfg
        ),
        asyncio.to_thread(omega_check, params, coeffs, t),
        asyncio.to_thread(
            lambda: [waveguide_fluctuations_closed_form(params, float(x)) for x in t]
        ),
    )
    return numeric, omega_result, closed_records


def cross_validate(
    params: WaveguideParams,
    grid: TimeGrid,
    cfg: IntegratorConfig,
    tols: ValidationTolerances | None = None,
    quad_tol: float = DEFAULT_QUAD_TOL,
) -> ValidationReport:
    """Check the closed form against the general pipeline on grid.

    Integrates the oscillator under the closed-form Omega^2 from closed-form
    initial data at grid.t_start. The integration, the frequency consistency
    sweep and the closed-form moments run concurrently. The numeric series is
    then compared with the closed form for eps, the Wronskian, the moments and
    their saturation.

    Raises:
        IntegrationError: Propagated from the integrator.
        QuadratureError: Propagated from the phase integral.
    """
    tols = tols or ValidationTolerances()
    coeffs = waveguide_coefficient_set(params)
    closed = closed_form_series(params, grid, quad_tol)
    numeric, omega_result, closed_records = asyncio.run(_run_checks(params, grid, cfg, closed))
    numeric_records = fluctuations_from_series(coeffs, numeric, params.hbar)

    report = ValidationReport(
        params=params,
        tolerances=tols,
        ode=ode_check(numeric, closed),
        wronskian=_worst(numeric.wronskian_drift(), numeric.t),
        fluct=fluct_check(numeric_records, closed_records, params),
        saturation=max(
            saturation_check(numeric_records, params.hbar),
            saturation_check(closed_records, params.hbar),
            key=lambda r: r.value,
        ),
        omega=omega_result,
    )
    for name, result, tolerance in report.checks():
        if name in report.failures:
            logger.warning(
                "%s check failed: %.3e >= %.3e (worst at t=%.6g)",
                name,
                result.value,
                tolerance,
                result.t_worst,
            )
    return report
