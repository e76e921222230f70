"""Point states shared across modules."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .constants import DEFAULT_HBAR
from .errors import DomainError


@dataclass(frozen=True)
class OscillatorState:
    """Complex solution eps of eps'' + Omega^2 eps = 0 and its derivative at t."""

    t: float
    eps: complex
    deps: complex

    @property
    def eps1(self) -> float:
        """Real part: first coordinate of the 2D oscillator."""
        return self.eps.real

    @property
    def eps2(self) -> float:
        """Imaginary part: second coordinate of the 2D oscillator."""
        return self.eps.imag

    @property
    def rho(self) -> float:
        return abs(self.eps)

    @property
    def drho(self) -> float:
        """d|eps|/dt = Re(deps * conj(eps)) / |eps|."""
        rho = abs(self.eps)
        if rho == 0.0:
            raise DomainError(f"|eps| vanishes at t={self.t}")
        return (self.deps * self.eps.conjugate()).real / rho

    def scaled(self, alpha: complex) -> OscillatorState:
        return OscillatorState(self.t, alpha * self.eps, alpha * self.deps)


@dataclass(frozen=True)
class PolarForm:
    """eps = rho * exp(i * phase) relative to the series origin."""

    t: float
    rho: float
    drho: float
    phase: float


@dataclass(frozen=True)
class FluctuationRecord:
    """Second moments at one time.

    c_qp carries the sign fixed by d(sigma_q^2)/dt = 4 a c_qp + 4 b sigma_q^2;
    c_qp2 is its square.
    """

    t: float
    sigma_q2: float
    sigma_p2: float
    c_qp2: float
    saturation_residual: float
    c_qp: float = 0.0


@dataclass(frozen=True)
class HamiltonPairState:
    """Canonical pair (sigma, Pi) = (sigma_q, c_qp / sigma_q)."""

    t: float
    sigma: float
    pi: float


@dataclass(frozen=True)
class TrajectoryState:
    """Classical phase-space point (q, p)."""

    t: float
    q: float
    p: float


class EnvelopeConvention(enum.Enum):
    """Squeeze envelope used by the waveguide closed forms.

    The value multiplies s*t inside the hyperbolic functions. EXACT matches the
    Heisenberg evolution of the waveguide Hamiltonian; HALF_RATE reproduces the
    commonly quoted closed form whose envelope grows at half that rate.
    """

    EXACT = 2.0
    HALF_RATE = 1.0

    @classmethod
    def from_name(cls, name: str) -> EnvelopeConvention:
        key = name.strip().lower().replace("-", "_")
        for member in cls:
            if member.name.lower() == key:
                return member
        raise DomainError(f"unknown envelope convention '{name}'")

    @property
    def label(self) -> str:
        return self.name.lower().replace("_", "-")


@dataclass(frozen=True)
class WaveguideParams:
    """Degenerate down-conversion in a nonlinear waveguide."""

    omega: float
    s: float
    hbar: float = DEFAULT_HBAR
    envelope: EnvelopeConvention = EnvelopeConvention.EXACT

    def __post_init__(self) -> None:
        if not (math.isfinite(self.omega) and self.omega > 0):
            raise DomainError(f"omega must be positive, got {self.omega}")
        if not (math.isfinite(self.s) and self.s >= 0):
            raise DomainError(f"s must be non-negative, got {self.s}")
        if not (math.isfinite(self.hbar) and self.hbar > 0):
            raise DomainError(f"hbar must be positive, got {self.hbar}")
        if not 2.0 * self.s < self.omega:
            raise DomainError(
                f"2s < omega is required, got s={self.s}, omega={self.omega}"
            )

    @property
    def rate(self) -> float:
        """Envelope rate: hyperbolic arguments are rate * t and 2 * rate * t."""
        return self.envelope.value * self.s
