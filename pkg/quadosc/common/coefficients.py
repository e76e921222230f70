"""Time-dependent coefficients of the quadratic Hamiltonian.

H = a(t) p^2 + b(t) [p, q]_+ + c(t) q^2 + d(t) p + e(t) q + f(t), with m = 1.
Only the undriven case d = e = f = 0 is supported.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Callable

from .constants import FD_MIN_STEP, FD_REL_STEP
from .errors import DomainError, NonFiniteError

if TYPE_CHECKING:
    from .states import WaveguideParams

RealFn = Callable[[float], float]


class DerivativeMode(enum.Enum):
    """How da, dda and db are obtained."""

    ANALYTIC = "analytic"
    FINITE_DIFFERENCE = "finite_difference"


def _zero(t: float) -> float:
    return 0.0


def default_fd_step(t: float) -> float:
    """Default finite-difference step at time t."""
    return max(FD_MIN_STEP, FD_REL_STEP * abs(t))


def finite_difference_derivatives(
    fn: RealFn, t: float, h: float | None = None
) -> tuple[float, float]:
    """Central five-point estimates of fn'(t) and fn''(t).

    Args:
        fn: Function evaluable on [t - 2h, t + 2h].
        t: Evaluation point.
        h: Step; defaults to default_fd_step(t).

    Returns:
        (first, second) derivative estimates.

    Raises:
        DomainError: If h is not a positive finite number.
        NonFiniteError: If any stencil value is NaN or infinite.
    """
    if h is None:
        h = default_fd_step(t)
    if not math.isfinite(h) or h <= 0:
        raise DomainError(f"finite-difference step must be positive, got {h}")

    fm2, fm1, f0, fp1, fp2 = (fn(t + k * h) for k in (-2, -1, 0, 1, 2))
    for value in (fm2, fm1, f0, fp1, fp2):
        if not math.isfinite(value):
            raise NonFiniteError(f"non-finite function value near t={t}")

    first = (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * h)
    second = (-fm2 + 16.0 * fm1 - 30.0 * f0 + 16.0 * fp1 - fp2) / (12.0 * h * h)
    return first, second


@dataclass(frozen=True)
class CoefficientValues:
    """Coefficients and the derivatives entering the frequency, at one time."""

    t: float
    a: float
    b: float
    c: float
    da: float
    dda: float
    db: float


@dataclass(frozen=True)
class CoefficientSet:
    """Numeric evaluables a, b, c (d, e, f must vanish) with derivative access."""

    a: RealFn
    b: RealFn
    c: RealFn
    d: RealFn = _zero
    e: RealFn = _zero
    f: RealFn = _zero
    da: RealFn | None = None
    dda: RealFn | None = None
    db: RealFn | None = None
    derivative_mode: DerivativeMode = DerivativeMode.FINITE_DIFFERENCE
    fd_step: float | None = None

    def __post_init__(self) -> None:
        if self.derivative_mode is DerivativeMode.ANALYTIC and (
            self.da is None or self.dda is None or self.db is None
        ):
            raise DomainError("analytic mode needs da, dda and db closures")

    @classmethod
    def stationary(cls, omega: float) -> CoefficientSet:
        """a = 1/2, b = 0, c = omega^2/2: the time-independent oscillator."""
        half_w2 = 0.5 * omega * omega
        return cls(
            a=lambda t: 0.5,
            b=_zero,
            c=lambda t: half_w2,
            da=_zero,
            dda=_zero,
            db=_zero,
            derivative_mode=DerivativeMode.ANALYTIC,
        )

    @classmethod
    def waveguide(cls, params: WaveguideParams) -> CoefficientSet:
        """Down-conversion waveguide coefficients with analytic derivatives."""
        from ..physics.frequency import waveguide_coefficient_set

        return waveguide_coefficient_set(params)

    def with_finite_differences(self, fd_step: float | None = None) -> CoefficientSet:
        """Same a, b, c with derivatives replaced by finite differences."""
        return CoefficientSet(
            a=self.a,
            b=self.b,
            c=self.c,
            d=self.d,
            e=self.e,
            f=self.f,
            derivative_mode=DerivativeMode.FINITE_DIFFERENCE,
            fd_step=fd_step,
        )

    def abc(self, t: float) -> tuple[float, float, float]:
        """a(t), b(t), c(t) without derivative work."""
        return self.a(t), self.b(t), self.c(t)

    def a_derivatives(self, t: float) -> tuple[float, float]:
        """(da, dda) at t."""
        if self.derivative_mode is DerivativeMode.ANALYTIC:
            assert self.da is not None and self.dda is not None
            return self.da(t), self.dda(t)
        return finite_difference_derivatives(self.a, t, self.fd_step)

    def b_derivative(self, t: float) -> float:
        """db at t."""
        if self.derivative_mode is DerivativeMode.ANALYTIC:
            assert self.db is not None
            return self.db(t)
        return finite_difference_derivatives(self.b, t, self.fd_step)[0]

    def check_undriven(self, t: float) -> None:
        """Reject non-zero drive terms d, e, f at t."""
        for name, fn in (("d", self.d), ("e", self.e), ("f", self.f)):
            value = fn(t)
            if value != 0.0:
                raise DomainError(
                    f"drive term {name}(t={t}) = {value}; only d = e = f = 0 is supported"
                )

    def evaluate(self, t: float) -> CoefficientValues:
        """All coefficient data at t.

        Raises:
            DomainError: If a(t) <= 0 or a drive term is non-zero.
        """
        self.check_undriven(t)
        a, b, c = self.abc(t)
        if not a > 0:
            raise DomainError(f"a(t) must be positive, got a({t}) = {a}")
        da, dda = self.a_derivatives(t)
        db = self.b_derivative(t)
        return CoefficientValues(t=t, a=a, b=b, c=c, da=da, dda=dda, db=db)
