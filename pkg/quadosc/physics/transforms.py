"""Maps between the oscillator equation and its Riccati, mass, Hamilton-pair and Ermakov forms.

Series-level maps work on sampled data. Running integrals and phases are
integrated panel by panel from each sample, and residual columns use
second-order sample gradients.
"""

from __future__ import annotations

import logging
import math

import numpy as np
from scipy.interpolate import CubicSpline

from ..common.coefficients import CoefficientSet, RealFn
from ..common.errors import DegenerateTransformError, DomainError
from ..common.series import (
    ComplexArray,
    ErmakovSeries,
    FloatArray,
    HamiltonPairSeries,
    OscillatorSeries,
    PolarSeries,
    RiccatiSeries,
    from_polar,
    running_integral,
)
from ..common.states import HamiltonPairState, OscillatorState
from ..solver.dynamics import (
    ermakov_rhs,
    hamilton_pair_rhs,
    integrate_oscillator_at,
    integrate_panels,
    riccati_rhs,
)
from ..solver.integrator import IntegratorConfig
from .frequency import FrequencyProfile
from .invariants import invariant_bracket

logger = logging.getLogger(__name__)


def _gradient(values: np.ndarray, t: FloatArray) -> np.ndarray:
    if len(t) < 3:
        raise DomainError(f"at least three samples are needed for a gradient, got {len(t)}")
    return np.gradient(values, t, edge_order=2)


def _check_panels(t: FloatArray) -> None:
    if len(t) < 2:
        raise DomainError(f"at least two samples are needed, got {len(t)}")
    if not np.all(np.diff(t) > 0):
        raise DomainError("sample times must be strictly increasing")


# Riccati


def coeffs_to_riccati(coeffs: CoefficientSet, t: float) -> tuple[float, float, float]:
    """(a1', a2', a3') = (-2c, -4b, -2a)."""
    a, b, c = coeffs.abc(t)
    return -2.0 * c, -4.0 * b, -2.0 * a


def riccati_functions(coeffs: CoefficientSet) -> tuple[RealFn, RealFn, RealFn, RealFn]:
    """a1', a2', a3' and d(a3')/dt as functions of t."""
    return (
        lambda t: -2.0 * coeffs.c(t),
        lambda t: -4.0 * coeffs.b(t),
        lambda t: -2.0 * coeffs.a(t),
        lambda t: -2.0 * coeffs.a_derivatives(t)[0],
    )


def _riccati_integrals(
    fns: tuple[RealFn, RealFn, RealFn], t: FloatArray, c1: ComplexArray, cfg: IntegratorConfig
) -> tuple[ComplexArray, ...]:
    """c2, c3, k2 and k3 on t, each panel integrated from the sampled c1.

    A panel started at t[k] with zero integrals gives the increment of c2
    and the integral J of a3' e^{c2 - c2[k]}, so c3[k+1] = c3[k] + e^{c2[k]} J.
    """
    starts = np.zeros((len(t), 10))
    starts[:, 0], starts[:, 1] = c1.real, c1.imag
    ends = integrate_panels(riccati_rhs(*fns), starts, t, cfg, label="riccati panels")
    local = ends[:, 0::2] + 1j * ends[:, 1::2]
    c2, c3, k2, k3 = (np.zeros(len(t), dtype=np.complex128) for _ in range(4))
    for k in range(len(t) - 1):
        c2[k + 1] = c2[k] + local[k, 1]
        c3[k + 1] = c3[k] + np.exp(c2[k]) * local[k, 2]
        k2[k + 1] = k2[k] + local[k, 3]
        k3[k + 1] = k3[k] + np.exp(k2[k]) * local[k, 4]
    return c2, c3, k2, k3


def riccati_from_samples(
    t: FloatArray,
    c1: ComplexArray,
    a1p: FloatArray,
    a2p: FloatArray,
    a3p: FloatArray,
    da3p: FloatArray,
    cfg: IntegratorConfig | None = None,
) -> RiccatiSeries:
    """Riccati series from sampled c1 and coefficients.

    The coefficients are interpolated by cubic splines and the running
    integrals come from integrating the Riccati equation across each panel.
    """
    cfg = cfg or IntegratorConfig()
    t = np.asarray(t, dtype=np.float64)
    _check_panels(t)
    c1 = np.asarray(c1, dtype=np.complex128)
    fns = (
        _spline_fn(CubicSpline(t, a1p)),
        _spline_fn(CubicSpline(t, a2p)),
        _spline_fn(CubicSpline(t, a3p)),
    )
    c2, c3, k2, k3 = _riccati_integrals(fns, t, c1, cfg)
    return RiccatiSeries(t, c1, c2, c3, k2, k3, a1p, a2p, a3p, da3p)


def _spline_fn(spline: CubicSpline) -> RealFn:
    return lambda x: float(spline(x))


def riccati_to_epsilon(series: RiccatiSeries, m0omega0: float = 1.0) -> OscillatorSeries:
    """Oscillator solution generated by a Riccati solution.

    eps = -e^{-k2/2} (m0omega0 k3 + i) / sqrt(m0omega0 a3') with the principal
    square root, and deps = L eps - e^{k2/2} sqrt(m0omega0 a3') where
    L = -(dk2/dt)/2 - (da3'/dt)/(2 a3'). The result solves the oscillator
    equation but is not Wronskian-normalized in general.

    Raises:
        DomainError: If m0omega0 <= 0.
        DegenerateTransformError: If a3' vanishes on the series.
    """
    if not m0omega0 > 0:
        raise DomainError(f"m0omega0 must be positive, got {m0omega0}")
    if np.any(series.a3p == 0.0):
        k = int(np.argmax(series.a3p == 0.0))
        raise DegenerateTransformError(f"a3' vanishes at t={series.t[k]}")

    root = np.sqrt((m0omega0 * series.a3p).astype(np.complex128))
    eps = -np.exp(-0.5 * series.k2) * (m0omega0 * series.k3 + 1j) / root
    dk2 = series.a2p + 2.0 * series.a3p * series.c1
    log_rate = -0.5 * dk2 - series.da3p / (2.0 * series.a3p)
    deps = log_rate * eps - np.exp(0.5 * series.k2) * root
    return OscillatorSeries(series.t, np.asarray(eps), np.asarray(deps))


def epsilon_to_riccati(
    coeffs: CoefficientSet, series: OscillatorSeries, cfg: IntegratorConfig | None = None
) -> RiccatiSeries:
    """Riccati solution c1 = (deps/eps + da/(2a) - 2b) / (2a) of an oscillator series.

    The running integrals are integrated panel by panel under the exact
    coefficient functions.

    Raises:
        DomainError: If eps vanishes or a(t) <= 0 on the series.
    """
    _check_panels(series.t)
    if np.any(series.eps == 0):
        raise DomainError("eps vanishes on the series")
    values = [coeffs.evaluate(float(x)) for x in series.t]
    a = np.array([v.a for v in values])
    b = np.array([v.b for v in values])
    c = np.array([v.c for v in values])
    da = np.array([v.da for v in values])
    c1 = np.asarray((series.deps / series.eps + da / (2.0 * a) - 2.0 * b) / (2.0 * a))
    a1p, a2p, a3p, _ = riccati_functions(coeffs)
    c2, c3, k2, k3 = _riccati_integrals((a1p, a2p, a3p), series.t, c1, cfg or IntegratorConfig())
    return RiccatiSeries(series.t, c1, c2, c3, k2, k3, -2.0 * c, -4.0 * b, -2.0 * a, -2.0 * da)


def riccati_residual_to_oscillator(series: RiccatiSeries, m0omega0: float = 1.0) -> ComplexArray:
    """eps'' + Omega^2 eps of the mapped series, which equals -a3' eps (dc1/dt - RHS)."""
    eps = riccati_to_epsilon(series, m0omega0).eps
    return np.asarray(-series.a3p * eps * series.riccati_residual())


# Time-dependent mass


def _check_mass(m: float) -> None:
    if not (math.isfinite(m) and m > 0):
        raise DegenerateTransformError(f"mass must be positive, got {m}")


def mass_to_epsilon(f: float, df: float, m: float, dm: float, t: float) -> tuple[float, float]:
    """eps = f sqrt(m), deps = sqrt(m) (df + f dm / (2m)).

    Raises:
        DegenerateTransformError: If m <= 0 at t.
    """
    try:
        _check_mass(m)
    except DegenerateTransformError as exc:
        raise DegenerateTransformError(f"{exc} at t={t}") from exc
    root = math.sqrt(m)
    return f * root, root * (df + f * dm / (2.0 * m))


def epsilon_to_mass(eps: float, deps: float, m: float, dm: float) -> tuple[float, float]:
    """Inverse of mass_to_epsilon: f = eps / sqrt(m), df = deps / sqrt(m) - f dm / (2m)."""
    _check_mass(m)
    root = math.sqrt(m)
    f = eps / root
    return f, deps / root - f * dm / (2.0 * m)


def effective_frequency_from_mass(omega2: float, m: float, dm: float, ddm: float) -> float:
    """omega^2 + (dm/m)^2 / 4 - (ddm/m) / 2."""
    _check_mass(m)
    return omega2 + 0.25 * (dm / m) ** 2 - 0.5 * ddm / m


def mass_series_to_epsilon(
    t: FloatArray, f: FloatArray, df: FloatArray, m: FloatArray, dm: FloatArray
) -> OscillatorSeries:
    pairs = [
        mass_to_epsilon(float(f[k]), float(df[k]), float(m[k]), float(dm[k]), float(t[k]))
        for k in range(len(t))
    ]
    return OscillatorSeries(
        np.asarray(t, dtype=np.float64),
        np.array([p[0] for p in pairs], dtype=np.complex128),
        np.array([p[1] for p in pairs], dtype=np.complex128),
    )


# Polar, Ermakov and Hamilton pair


def polar_to_epsilon_samples(
    t: FloatArray, rho: FloatArray, drho: FloatArray, phase: FloatArray | None = None
) -> OscillatorSeries:
    """Normalized eps from sampled rho and drho.

    Without a phase the phase is the quadrature of 1/rho^2 over the samples.
    """
    if np.any(rho <= 0):
        raise DomainError("rho must be positive on the series")
    if phase is None:
        phase = running_integral(1.0 / rho**2, t)
    return from_polar(PolarSeries(t, rho, drho, np.asarray(phase, dtype=np.float64)))


def _panel_phase(increments: FloatArray) -> FloatArray:
    return np.concatenate(([0.0], np.cumsum(increments)))


def ermakov_to_epsilon(
    series: ErmakovSeries, freq: FrequencyProfile, cfg: IntegratorConfig | None = None
) -> OscillatorSeries:
    """Normalized eps from an Ermakov series.

    The phase integral of 1/rho^2 is carried through each panel of the
    Ermakov equation started from the sampled (rho, drho).
    """
    if np.any(series.rho <= 0):
        raise DomainError("rho must be positive on the series")
    _check_panels(series.t)
    starts = np.column_stack((series.rho, series.drho, np.zeros(len(series.t))))
    rhs = ermakov_rhs(freq, with_phase=True)
    ends = integrate_panels(rhs, starts, series.t, cfg or IntegratorConfig(), label="ermakov panels")
    return polar_to_epsilon_samples(series.t, series.rho, series.drho, _panel_phase(ends[:, 2]))


def epsilon_to_ermakov(series: OscillatorSeries) -> ErmakovSeries:
    return ErmakovSeries(series.t, series.rho(), series.drho())


def hamilton_pair_from_epsilon(
    coeffs: CoefficientSet, state: OscillatorState, hbar: float
) -> HamiltonPairState:
    """sigma = sqrt(hbar a) rho and Pi = c_qp / sigma = -sqrt(hbar/a) X.

    Raises:
        DomainError: If a(t) <= 0 or eps = 0.
    """
    v = coeffs.evaluate(state.t)
    rho, drho = state.rho, state.drho
    x = invariant_bracket(v, rho, drho).real
    return HamiltonPairState(
        t=state.t,
        sigma=math.sqrt(hbar * v.a) * rho,
        pi=-math.sqrt(hbar / v.a) * x,
    )


def hamilton_pair_series_from_epsilon(
    coeffs: CoefficientSet, series: OscillatorSeries, hbar: float
) -> HamiltonPairSeries:
    states = [hamilton_pair_from_epsilon(coeffs, s, hbar) for s in series]
    return HamiltonPairSeries(
        t=series.t,
        sigma=np.array([s.sigma for s in states]),
        pi=np.array([s.pi for s in states]),
    )


def hamilton_pair_to_epsilon(
    coeffs: CoefficientSet,
    series: HamiltonPairSeries,
    hbar: float,
    cfg: IntegratorConfig | None = None,
) -> OscillatorSeries:
    """Normalized eps from (sigma, Pi): rho = sigma / sqrt(hbar a), drho from the bracket X.

    The phase integral of hbar a / sigma^2 is carried through each panel of
    the pair equations started from the sampled (sigma, Pi).
    """
    if np.any(series.sigma <= 0):
        raise DomainError("sigma must be positive on the series")
    _check_panels(series.t)
    values = [coeffs.evaluate(float(x)) for x in series.t]
    a = np.array([v.a for v in values])
    b = np.array([v.b for v in values])
    da = np.array([v.da for v in values])
    rho = series.sigma / np.sqrt(hbar * a)
    x = -series.pi * np.sqrt(a / hbar)
    drho = 2.0 * (b * rho - da * rho / (4.0 * a) - x)
    starts = np.column_stack((series.sigma, series.pi, np.zeros(len(series.t))))
    rhs = hamilton_pair_rhs(coeffs, hbar, with_phase=True)
    ends = integrate_panels(rhs, starts, series.t, cfg or IntegratorConfig(), label="pair panels")
    return polar_to_epsilon_samples(series.t, rho, drho, _panel_phase(ends[:, 2]))


# Residuals


def oscillator_sample_residual(series: OscillatorSeries, omega2: FloatArray) -> ComplexArray:
    """eps'' + Omega^2 eps with eps'' from the gradient of deps."""
    return np.asarray(_gradient(series.deps, series.t) + omega2 * series.eps)


def ermakov_sample_residual(series: ErmakovSeries, omega2: FloatArray) -> FloatArray:
    """rho'' - 1/rho^3 + Omega^2 rho with rho'' from the gradient of drho."""
    return np.asarray(_gradient(series.drho, series.t) - 1.0 / series.rho**3 + omega2 * series.rho)


def hamilton_pair_sample_residual(
    coeffs: CoefficientSet, series: HamiltonPairSeries, hbar: float
) -> FloatArray:
    """dPi/dt - (-2c sigma - 2b Pi + hbar^2 a / (2 sigma^3)) with dPi/dt from the gradient."""
    abc = np.array([coeffs.abc(float(x)) for x in series.t])
    a, b, c = abc[:, 0], abc[:, 1], abc[:, 2]
    sigma, pi = series.sigma, series.pi
    rhs = -2.0 * c * sigma - 2.0 * b * pi + 0.5 * hbar * hbar * a / sigma**3
    return np.asarray(_gradient(pi, series.t) - rhs)


def propagation_residual(
    series: OscillatorSeries, freq: FrequencyProfile, cfg: IntegratorConfig
) -> float:
    """Re-integrate the oscillator from the first sample; sup |deviation| / sup |eps|."""
    numeric = integrate_oscillator_at(freq, series[0], series.t, cfg)
    scale = float(np.max(np.abs(series.eps)))
    if scale == 0.0:
        raise DomainError("eps vanishes on the whole series")
    residual = float(np.max(np.abs(numeric.eps - series.eps))) / scale
    logger.debug("propagation residual %.3e over %d samples", residual, len(series))
    return residual
