"""Fixed-step Dormand-Prince 5(4) for convergence-order checks."""

from __future__ import annotations

import numpy as np
import numpy.typing as npt

from ..common.errors import DomainError, NonFiniteError
from .integrator import RealRhs

FloatArray = npt.NDArray[np.float64]

# Butcher tableau
C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
B4 = np.array(
    [5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40]
)


def dormand_prince_step(
    rhs: RealRhs, t: float, y: FloatArray, h: float
) -> tuple[FloatArray, FloatArray]:
    """One step of size h.

    Returns:
        (y_next, error_estimate): the fifth-order solution and its difference
        to the embedded fourth-order one.
    """
    stages = np.empty((7, len(y)), dtype=np.float64)
    for i in range(7):
        increment = np.zeros_like(y)
        for j, a_ij in enumerate(A[i]):
            increment += a_ij * stages[j]
        stages[i] = rhs(t + C[i] * h, y + h * increment)

    y5 = y + h * (B5 @ stages)
    y4 = y + h * (B4 @ stages)
    return y5, y5 - y4


def integrate_fixed_step(
    rhs: RealRhs, y0: FloatArray, t0: float, t1: float, n_steps: int
) -> FloatArray:
    """Advance y0 from t0 to t1 in n_steps equal steps; returns the final state."""
    if n_steps < 1:
        raise DomainError(f"n_steps must be at least 1, got {n_steps}")
    if not t1 > t0:
        raise DomainError(f"t1 ({t1}) must exceed t0 ({t0})")

    h = (t1 - t0) / n_steps
    y = np.asarray(y0, dtype=np.float64)
    for k in range(n_steps):
        y, _ = dormand_prince_step(rhs, t0 + k * h, y, h)
        if not np.all(np.isfinite(y)):
            raise NonFiniteError(f"state became non-finite at t={t0 + (k + 1) * h:.6g}")
    return y
