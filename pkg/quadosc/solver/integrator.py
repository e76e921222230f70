"""Adaptive embedded Runge-Kutta driver with dense output at requested times."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
import numpy.typing as npt
from scipy.integrate import DOP853, RK45

from ..common.constants import (
    DEFAULT_ABS_TOL,
    DEFAULT_MAX_STEPS,
    DEFAULT_METHOD,
    DEFAULT_REL_TOL,
    SUPPORTED_METHODS,
)
from ..common.errors import DomainError, IntegrationError, NonFiniteError, StepLimitError

logger = logging.getLogger(__name__)

FloatArray = npt.NDArray[np.float64]
RealRhs = Callable[[float, FloatArray], FloatArray]
# Called after every accepted step with (t, y, step size); raises to abort the run
StepGuard = Callable[[float, FloatArray, float], None]

_SOLVERS = {"DOP853": DOP853, "RK45": RK45}


@dataclass(frozen=True)
class IntegratorConfig:
    """Tolerances and limits for one integration run."""

    rel_tol: float = DEFAULT_REL_TOL
    abs_tol: float = DEFAULT_ABS_TOL
    max_step: float = math.inf
    max_steps: int = DEFAULT_MAX_STEPS
    method: str = DEFAULT_METHOD

    def __post_init__(self) -> None:
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise DomainError(
                f"tolerances must be positive, got rel_tol={self.rel_tol}, abs_tol={self.abs_tol}"
            )
        if not self.max_step > 0:
            raise DomainError(f"max_step must be positive, got {self.max_step}")
        if self.max_steps < 1:
            raise DomainError(f"max_steps must be at least 1, got {self.max_steps}")
        if self.method not in SUPPORTED_METHODS:
            raise DomainError(
                f"unknown method '{self.method}', expected one of {', '.join(SUPPORTED_METHODS)}"
            )


def integrate_real(
    rhs: RealRhs,
    y0: FloatArray,
    t_out: FloatArray,
    cfg: IntegratorConfig,
    guard: StepGuard | None = None,
    label: str = "ode",
) -> FloatArray:
    """Integrate a real first-order system and sample it at t_out.

    The solver takes its own adaptive steps from t_out[0] to t_out[-1]; output
    points are filled from the dense interpolant of the step that covers them.

    Args:
        rhs: Right-hand side f(t, y).
        y0: Initial state.
        t_out: Strictly increasing output times; y0 is the state at t_out[0].
        cfg: Tolerances, step limits and method.
        guard: Optional check run after every accepted step.
        label: Name used in log messages.

    Returns:
        Array of shape (len(t_out), len(y0)); row k is the state at t_out[k].

    Raises:
        NonFiniteError: If the initial or an integrated state is not finite.
        DomainError: If t_out is not strictly increasing.
        StepLimitError: If cfg.max_steps steps do not reach t_out[-1].
        IntegrationError: If the underlying solver fails.
    """
    y0 = np.asarray(y0, dtype=np.float64)
    if not np.all(np.isfinite(y0)):
        raise NonFiniteError(f"{label}: non-finite initial state {y0}")

    t_out = np.asarray(t_out, dtype=np.float64)
    if len(t_out) > 1 and not np.all(np.diff(t_out) > 0):
        raise DomainError(f"{label}: output times must be strictly increasing")
    out = np.empty((len(t_out), len(y0)), dtype=np.float64)
    out[0] = y0
    if len(t_out) == 1:
        return out

    solver = _SOLVERS[cfg.method](
        rhs,
        float(t_out[0]),
        y0,
        float(t_out[-1]),
        rtol=cfg.rel_tol,
        atol=cfg.abs_tol,
        max_step=cfg.max_step,
    )

    k = 1
    steps = 0
    while k < len(t_out):
        if steps >= cfg.max_steps:
            raise StepLimitError(
                f"{label}: {cfg.max_steps} steps exhausted at t={solver.t:.6g} "
                f"before t_end={t_out[-1]:.6g}"
            )
        message = solver.step()
        steps += 1
        if solver.status == "failed":
            raise IntegrationError(f"{label}: solver failed at t={solver.t:.6g}: {message}")
        if not np.all(np.isfinite(solver.y)):
            raise NonFiniteError(f"{label}: state became non-finite at t={solver.t:.6g}")
        if guard is not None:
            guard(solver.t, solver.y, solver.t - solver.t_old)

        dense = solver.dense_output()
        while k < len(t_out) and t_out[k] <= solver.t:
            out[k] = dense(t_out[k])
            k += 1

    logger.debug(
        "%s: %d steps (%s), %d rhs evaluations, %d samples",
        label,
        steps,
        cfg.method,
        solver.nfev,
        len(t_out),
    )
    return out
