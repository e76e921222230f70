"""Exception hierarchy shared by the library and the CLI."""

from __future__ import annotations


class QuadoscError(Exception):
    """Base class for all quadosc errors."""


class DomainError(QuadoscError, ValueError):
    """A precondition on the inputs does not hold (a <= 0, 2s >= omega, ...)."""


class DegenerateTransformError(DomainError):
    """A substitution is undefined at the given point (a3' = 0, m <= 0)."""


class NonFiniteError(QuadoscError, ArithmeticError):
    """A function value or integrated state became NaN or infinite."""


class QuadratureError(QuadoscError, RuntimeError):
    """Adaptive quadrature did not reach the requested tolerance."""


class IntegrationError(QuadoscError, RuntimeError):
    """The ODE solver failed."""


class StepLimitError(IntegrationError):
    """The configured step budget was exhausted before the end of the grid."""


class SingularityError(IntegrationError):
    """A positive quantity (rho, sigma) collapsed onto its barrier."""


class RiccatiPoleError(IntegrationError):
    """The Riccati solution blew up in finite time."""

    def __init__(self, t_detected: float, t_pole_estimate: float, magnitude: float):
        self.t_detected = t_detected
        self.t_pole_estimate = t_pole_estimate
        self.magnitude = magnitude
        super().__init__(
            f"Riccati pole near t={t_pole_estimate:.6g} "
            f"(|c1|={magnitude:.3g} at t={t_detected:.6g}); "
            "restart the integration past the pole"
        )
