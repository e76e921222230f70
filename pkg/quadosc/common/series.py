"""Sampled solution series and the polar representation of eps."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np
import numpy.typing as npt
from scipy.integrate import cumulative_simpson, cumulative_trapezoid

from .constants import NORMALIZED_WRONSKIAN
from .errors import DomainError
from .states import HamiltonPairState, OscillatorState, PolarForm, TrajectoryState

FloatArray = npt.NDArray[np.float64]
ComplexArray = npt.NDArray[np.complex128]

# Series whose normalized Wronskian drift stays below this get quadrature-guided unwrapping
_NORMALIZED_DRIFT = 1e-6


def running_integral(values: npt.NDArray[np.generic], t: FloatArray) -> npt.NDArray[np.generic]:
    """Cumulative integral of sampled values from t[0], starting at 0.

    Uses Simpson's rule when there are at least three samples. Complex input is
    integrated component-wise.
    """
    values = np.asarray(values)
    if np.iscomplexobj(values):
        re = running_integral(values.real, t)
        im = running_integral(values.imag, t)
        return np.asarray(re + 1j * im)
    n = len(t)
    if n == 1:
        return np.zeros(1)
    if n == 2:
        return np.asarray(cumulative_trapezoid(values, t, initial=0.0))
    return np.asarray(cumulative_simpson(values, x=t, initial=0.0))


def _wrap(x: FloatArray) -> FloatArray:
    return np.asarray((x + np.pi) % (2.0 * np.pi) - np.pi)


@dataclass(frozen=True)
class OscillatorSeries:
    """eps and deps sampled on output times."""

    t: FloatArray
    eps: ComplexArray
    deps: ComplexArray

    def __len__(self) -> int:
        return len(self.t)

    def __getitem__(self, index: int) -> OscillatorState:
        return OscillatorState(float(self.t[index]), complex(self.eps[index]), complex(self.deps[index]))

    def __iter__(self) -> Iterator[OscillatorState]:
        for i in range(len(self)):
            yield self[i]

    @classmethod
    def from_states(cls, states: list[OscillatorState]) -> OscillatorSeries:
        if not states:
            raise DomainError("cannot build a series from no states")
        return cls(
            t=np.array([s.t for s in states], dtype=np.float64),
            eps=np.array([s.eps for s in states], dtype=np.complex128),
            deps=np.array([s.deps for s in states], dtype=np.complex128),
        )

    def rho(self) -> FloatArray:
        return np.abs(self.eps)

    def drho(self) -> FloatArray:
        rho = self.rho()
        if np.any(rho == 0.0):
            raise DomainError("|eps| vanishes on the series")
        return np.asarray((self.deps * np.conj(self.eps)).real / rho)

    def wronskian(self) -> ComplexArray:
        """W = deps * conj(eps) - eps * conj(deps) at every sample."""
        return np.asarray(self.deps * np.conj(self.eps) - self.eps * np.conj(self.deps))

    def wronskian_drift(self) -> FloatArray:
        """|W - 2i| relative to max(1, |eps| |deps|)."""
        scale = np.maximum(1.0, np.abs(self.eps) * np.abs(self.deps))
        return np.asarray(np.abs(self.wronskian() - NORMALIZED_WRONSKIAN) / scale)

    def scaled(self, alpha: complex) -> OscillatorSeries:
        return OscillatorSeries(self.t, alpha * self.eps, alpha * self.deps)


@dataclass(frozen=True)
class PolarSeries:
    """rho, drho and continuous phase; eps = rho * exp(i * (phase + origin))."""

    t: FloatArray
    rho: FloatArray
    drho: FloatArray
    phase: FloatArray
    origin: float = 0.0

    def __len__(self) -> int:
        return len(self.t)

    def __getitem__(self, index: int) -> PolarForm:
        return PolarForm(
            float(self.t[index]),
            float(self.rho[index]),
            float(self.drho[index]),
            float(self.phase[index]),
        )

    def phase_quadrature(self) -> FloatArray:
        """Running integral of 1/rho^2, the phase of a normalized solution."""
        return np.asarray(running_integral(1.0 / self.rho**2, self.t), dtype=np.float64)


def to_polar(series: OscillatorSeries) -> PolarSeries:
    """Polar form of a series with rho bounded away from 0.

    For Wronskian-normalized series each sample takes the branch of arg(eps)
    nearest to the running quadrature of 1/rho^2, so fast phase sweeps near
    the origin are not lost between samples. Otherwise np.unwrap is used.
    """
    rho = series.rho()
    drho = series.drho()
    raw = np.angle(series.eps)
    origin = float(raw[0])

    if len(series) > 1 and float(np.max(series.wronskian_drift())) < _NORMALIZED_DRIFT:
        guide_steps = np.diff(running_integral(1.0 / rho**2, series.t))
        raw_steps = np.diff(raw)
        steps = guide_steps + _wrap(raw_steps - guide_steps)
        phase = np.concatenate(([0.0], np.cumsum(steps)))
    else:
        phase = np.unwrap(raw) - origin

    return PolarSeries(series.t, rho, drho, np.asarray(phase, dtype=np.float64), origin)


def from_polar(polar: PolarSeries) -> OscillatorSeries:
    """Rebuild eps and deps; deps = (drho + i rho dphi/dt) e^{i phi}, dphi/dt = 1/rho^2."""
    rotation = np.exp(1j * (polar.phase + polar.origin))
    eps = polar.rho * rotation
    deps = (polar.drho + 1j / polar.rho) * rotation
    return OscillatorSeries(polar.t, np.asarray(eps), np.asarray(deps))


@dataclass(frozen=True)
class ErmakovSeries:
    """Solution rho of rho'' - 1/rho^3 + Omega^2 rho = 0."""

    t: FloatArray
    rho: FloatArray
    drho: FloatArray

    def __len__(self) -> int:
        return len(self.t)

    def __getitem__(self, index: int) -> tuple[float, float, float]:
        return float(self.t[index]), float(self.rho[index]), float(self.drho[index])


@dataclass(frozen=True)
class RiccatiSeries:
    """Riccati solution c1 with its running integrals.

    c2 and c3 are the integrals of a2' + a3' c1 and a3' e^{c2}. k2 and k3 use
    weight 2 on a3' c1; they are the ones that map c1 onto an oscillator
    solution. Coefficient samples a1', a2', a3' and d(a3')/dt travel along.
    """

    t: FloatArray
    c1: ComplexArray
    c2: ComplexArray
    c3: ComplexArray
    k2: ComplexArray
    k3: ComplexArray
    a1p: FloatArray
    a2p: FloatArray
    a3p: FloatArray
    da3p: FloatArray

    def __len__(self) -> int:
        return len(self.t)

    def riccati_residual(self) -> ComplexArray:
        """dc1/dt - (a1' + a2' c1 + a3' c1^2) with dc1/dt from a sample gradient."""
        if len(self) < 3:
            raise DomainError("at least three samples are needed for a gradient")
        dc1 = np.gradient(self.c1, self.t, edge_order=2)
        return np.asarray(dc1 - (self.a1p + self.a2p * self.c1 + self.a3p * self.c1**2))


@dataclass(frozen=True)
class HamiltonPairSeries:
    """(sigma, Pi) sampled on output times."""

    t: FloatArray
    sigma: FloatArray
    pi: FloatArray

    def __len__(self) -> int:
        return len(self.t)

    def __getitem__(self, index: int) -> HamiltonPairState:
        return HamiltonPairState(float(self.t[index]), float(self.sigma[index]), float(self.pi[index]))


@dataclass(frozen=True)
class TrajectorySeries:
    """Classical trajectory (q, p) sampled on output times."""

    t: FloatArray
    q: FloatArray
    p: FloatArray

    def __len__(self) -> int:
        return len(self.t)

    def __getitem__(self, index: int) -> TrajectoryState:
        return TrajectoryState(float(self.t[index]), float(self.q[index]), float(self.p[index]))

    def __iter__(self) -> Iterator[TrajectoryState]:
        for i in range(len(self)):
            yield self[i]
