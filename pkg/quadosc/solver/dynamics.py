"""Integration of the oscillator, Ermakov, Riccati and Hamilton-pair equations.

Complex unknowns are carried as pairs of real components so that every form
runs through the same real-valued driver in integrator.py.
"""

from __future__ import annotations

import logging
import math

import numpy as np

from ..common.coefficients import CoefficientSet, RealFn, finite_difference_derivatives
from ..common.constants import RHO_FLOOR, RICCATI_POLE_THRESHOLD
from ..common.errors import DomainError, RiccatiPoleError, SingularityError
from ..common.grid import TimeGrid
from ..common.series import (
    ErmakovSeries,
    FloatArray,
    HamiltonPairSeries,
    OscillatorSeries,
    RiccatiSeries,
    TrajectorySeries,
)
from ..common.states import HamiltonPairState, OscillatorState
from ..physics.frequency import FrequencyProfile
from .integrator import IntegratorConfig, RealRhs, StepGuard, integrate_real

logger = logging.getLogger(__name__)


def _check_start(t0: float, grid: TimeGrid) -> None:
    if t0 != grid.t_start:
        raise DomainError(f"initial time {t0} does not match grid start {grid.t_start}")


def oscillator_rhs(freq: FrequencyProfile) -> RealRhs:
    """eps'' = -Omega^2 eps on y = (Re eps, Im eps, Re deps, Im deps)."""

    def rhs(t: float, y: FloatArray) -> FloatArray:
        w2 = freq(t)
        return np.array([y[2], y[3], -w2 * y[0], -w2 * y[1]])

    return rhs


def integrate_oscillator_at(
    freq: FrequencyProfile,
    init: OscillatorState,
    t_out: FloatArray,
    cfg: IntegratorConfig,
) -> OscillatorSeries:
    """integrate_oscillator on arbitrary increasing output times starting at init.t."""
    if t_out[0] != init.t:
        raise DomainError(f"initial time {init.t} does not match first output time {t_out[0]}")
    y0 = np.array([init.eps.real, init.eps.imag, init.deps.real, init.deps.imag])
    y = integrate_real(oscillator_rhs(freq), y0, t_out, cfg, label="oscillator")
    series = OscillatorSeries(
        t=np.asarray(t_out, dtype=np.float64),
        eps=y[:, 0] + 1j * y[:, 1],
        deps=y[:, 2] + 1j * y[:, 3],
    )
    logger.debug("oscillator: max Wronskian drift %.3e", float(np.max(series.wronskian_drift())))
    return series


def integrate_oscillator(
    freq: FrequencyProfile,
    init: OscillatorState,
    grid: TimeGrid,
    cfg: IntegratorConfig,
) -> OscillatorSeries:
    """Solve eps'' + Omega^2(t) eps = 0 from init and sample on grid.

    Raises:
        DomainError: If init.t is not grid.t_start.
        StepLimitError: If the step budget runs out.
        NonFiniteError: If the state stops being finite.
    """
    _check_start(init.t, grid)
    return integrate_oscillator_at(freq, init, grid.points(), cfg)


def normalized_initial_state(rho0: float, drho0: float, t: float = 0.0) -> OscillatorState:
    """eps = rho0, deps = drho0 + i/rho0, so W = 2i exactly."""
    if not (math.isfinite(rho0) and rho0 > 0):
        raise DomainError(f"rho0 must be positive, got {rho0}")
    if not math.isfinite(drho0):
        raise DomainError(f"drho0 must be finite, got {drho0}")
    return OscillatorState(t, complex(rho0, 0.0), complex(drho0, 1.0 / rho0))


def integrate_panels(
    rhs: RealRhs,
    starts: FloatArray,
    t: FloatArray,
    cfg: IntegratorConfig,
    label: str = "panels",
) -> FloatArray:
    """Integrate rhs across each interval [t[k], t[k+1]] from its own start state.

    Returns:
        Array of shape (len(t) - 1, starts.shape[1]); row k is the state
        reached at t[k+1] from starts[k] at t[k].
    """
    starts = np.asarray(starts, dtype=np.float64)
    if len(starts) != len(t):
        raise DomainError(f"{label}: {len(starts)} start states for {len(t)} times")
    ends = np.empty((max(len(t) - 1, 0), starts.shape[1]), dtype=np.float64)
    for k in range(len(t) - 1):
        ends[k] = integrate_real(rhs, starts[k], t[k : k + 2], cfg, label=label)[-1]
    return ends


def _positivity_guard(name: str, floor: float) -> StepGuard:
    def guard(t: float, y: FloatArray, h: float) -> None:
        if y[0] <= floor:
            logger.warning("%s collapsed to %.3e at t=%.6g", name, y[0], t)
            raise SingularityError(f"{name} reached {y[0]:.3e} at t={t:.6g}")

    return guard


def ermakov_rhs(freq: FrequencyProfile, with_phase: bool = False) -> RealRhs:
    """rho'' = 1/rho^3 - Omega^2 rho on (rho, drho), optionally with phase' = 1/rho^2."""

    def rhs(t: float, y: FloatArray) -> FloatArray:
        rho = y[0]
        rates = [y[1], 1.0 / rho**3 - freq(t) * rho]
        if with_phase:
            rates.append(1.0 / rho**2)
        return np.array(rates)

    return rhs


def integrate_ermakov(
    freq: FrequencyProfile,
    rho0: float,
    drho0: float,
    grid: TimeGrid,
    cfg: IntegratorConfig,
) -> ErmakovSeries:
    """Solve rho'' = 1/rho^3 - Omega^2 rho.

    Raises:
        DomainError: If rho0 <= 0.
        SingularityError: If rho falls to the floor.
    """
    if not rho0 > 0:
        raise DomainError(f"rho0 must be positive, got {rho0}")
    floor = max(RHO_FLOOR, cfg.abs_tol)
    y = integrate_real(
        ermakov_rhs(freq),
        np.array([rho0, drho0]),
        grid.points(),
        cfg,
        guard=_positivity_guard("rho", floor),
        label="ermakov",
    )
    return ErmakovSeries(t=grid.points(), rho=y[:, 0], drho=y[:, 1])


class _PoleGuard:
    """Flags |c1| above the threshold while the solver is shrinking its steps."""

    def __init__(self, rhs: RealRhs, threshold: float) -> None:
        self._rhs = rhs
        self._threshold = threshold
        self._last_h = math.inf

    def __call__(self, t: float, y: FloatArray, h: float) -> None:
        shrinking = h < self._last_h
        self._last_h = h
        magnitude = math.hypot(y[0], y[1])
        if magnitude <= self._threshold or not shrinking:
            return
        rate = self._rhs(t, y)
        speed = math.hypot(rate[0], rate[1])
        # c1 ~ K / (t* - t) near a pole, so |c1| / |dc1/dt| ~ t* - t
        t_pole = t + magnitude / speed if speed > 0 else t
        logger.warning("Riccati pole: |c1|=%.3e at t=%.6g, pole near t=%.6g", magnitude, t, t_pole)
        raise RiccatiPoleError(t, t_pole, magnitude)


def riccati_rhs(a1p: RealFn, a2p: RealFn, a3p: RealFn) -> RealRhs:
    """Riccati equation for c1 with the integrands of c2, c3, k2 and k3.

    The state is the real and imaginary parts of (c1, c2, c3, k2, k3).
    """

    def rhs(t: float, y: FloatArray) -> FloatArray:
        p1, p2, p3 = a1p(t), a2p(t), a3p(t)
        c1 = complex(y[0], y[1])
        dc1 = p1 + p2 * c1 + p3 * c1 * c1
        dc2 = p2 + p3 * c1
        dc3 = p3 * np.exp(complex(y[2], y[3]))
        dk2 = p2 + 2.0 * p3 * c1
        dk3 = p3 * np.exp(complex(y[6], y[7]))
        return np.array(
            [
                dc1.real, dc1.imag,
                dc2.real, dc2.imag,
                dc3.real, dc3.imag,
                dk2.real, dk2.imag,
                dk3.real, dk3.imag,
            ]
        )

    return rhs


def integrate_riccati(
    a1p: RealFn,
    a2p: RealFn,
    a3p: RealFn,
    c1_0: complex,
    grid: TimeGrid,
    cfg: IntegratorConfig,
    da3p: RealFn | None = None,
) -> RiccatiSeries:
    """Solve dc1/dt = a1' + a2' c1 + a3' c1^2 with its running integrals in one pass.

    The state carries c1, c2 = int(a2' + a3' c1), c3 = int(a3' e^{c2}),
    k2 = int(a2' + 2 a3' c1) and k3 = int(a3' e^{k2}), all zero at t_start.

    Args:
        a1p, a2p, a3p: Riccati coefficients.
        c1_0: c1 at grid.t_start.
        grid: Output sampling.
        cfg: Integrator settings.
        da3p: Derivative of a3'; finite differences when omitted.

    Raises:
        RiccatiPoleError: If c1 blows up.
    """
    rhs = riccati_rhs(a1p, a2p, a3p)
    y0 = np.zeros(10)
    y0[0], y0[1] = c1_0.real, c1_0.imag
    t = grid.points()
    y = integrate_real(
        rhs, y0, t, cfg, guard=_PoleGuard(rhs, RICCATI_POLE_THRESHOLD), label="riccati"
    )

    def derivative(fn: RealFn) -> RealFn:
        return lambda x: finite_difference_derivatives(fn, x)[0]

    da3p_fn = da3p if da3p is not None else derivative(a3p)
    return RiccatiSeries(
        t=t,
        c1=y[:, 0] + 1j * y[:, 1],
        c2=y[:, 2] + 1j * y[:, 3],
        c3=y[:, 4] + 1j * y[:, 5],
        k2=y[:, 6] + 1j * y[:, 7],
        k3=y[:, 8] + 1j * y[:, 9],
        a1p=np.array([a1p(x) for x in t]),
        a2p=np.array([a2p(x) for x in t]),
        a3p=np.array([a3p(x) for x in t]),
        da3p=np.array([da3p_fn(x) for x in t]),
    )


def _abc(coeffs: CoefficientSet, t: float) -> tuple[float, float, float]:
    a, b, c = coeffs.abc(t)
    if not a > 0:
        raise DomainError(f"a(t) must be positive, got a({t}) = {a}")
    return a, b, c


def hamilton_pair_rhs(coeffs: CoefficientSet, hbar: float, with_phase: bool = False) -> RealRhs:
    """(sigma, Pi) equations, optionally with phase' = hbar a / sigma^2 = 1/rho^2."""
    half_h2 = 0.5 * hbar * hbar

    def rhs(t: float, y: FloatArray) -> FloatArray:
        a, b, c = _abc(coeffs, t)
        sigma, pi = y[0], y[1]
        rates = [
            2.0 * b * sigma + 2.0 * a * pi,
            -2.0 * c * sigma - 2.0 * b * pi + half_h2 * a / sigma**3,
        ]
        if with_phase:
            rates.append(hbar * a / sigma**2)
        return np.array(rates)

    return rhs


def integrate_hamilton_pair(
    coeffs: CoefficientSet,
    init: HamiltonPairState,
    hbar: float,
    grid: TimeGrid,
    cfg: IntegratorConfig,
) -> HamiltonPairSeries:
    """Solve dsigma/dt = 2b sigma + 2a Pi, dPi/dt = -2c sigma - 2b Pi + hbar^2 a / (2 sigma^3).

    Raises:
        DomainError: If init.sigma <= 0, a(t) <= 0 or a drive term is non-zero.
        SingularityError: If sigma falls to the floor.
    """
    _check_start(init.t, grid)
    coeffs.check_undriven(grid.t_start)
    if not init.sigma > 0:
        raise DomainError(f"sigma must be positive, got {init.sigma}")
    floor = max(RHO_FLOOR, cfg.abs_tol)
    y = integrate_real(
        hamilton_pair_rhs(coeffs, hbar),
        np.array([init.sigma, init.pi]),
        grid.points(),
        cfg,
        guard=_positivity_guard("sigma", floor),
        label="hamilton_pair",
    )
    return HamiltonPairSeries(t=grid.points(), sigma=y[:, 0], pi=y[:, 1])


def integrate_classical_trajectory(
    coeffs: CoefficientSet,
    q0: float,
    p0: float,
    grid: TimeGrid,
    cfg: IntegratorConfig,
) -> TrajectorySeries:
    """Hamilton equations dq/dt = 2ap + 2bq, dp/dt = -2cq - 2bp.

    Raises:
        DomainError: If a drive term is non-zero or a(t) <= 0.
    """
    coeffs.check_undriven(grid.t_start)

    def rhs(t: float, y: FloatArray) -> FloatArray:
        a, b, c = _abc(coeffs, t)
        q, p = y
        return np.array([2.0 * a * p + 2.0 * b * q, -2.0 * c * q - 2.0 * b * p])

    y = integrate_real(rhs, np.array([q0, p0]), grid.points(), cfg, label="trajectory")
    return TrajectorySeries(t=grid.points(), q=y[:, 0], p=y[:, 1])
