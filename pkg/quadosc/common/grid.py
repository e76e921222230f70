"""Uniform output time grids."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from .errors import DomainError

# Absorbs representation error in span/step (e.g. 0.3/0.1 = 2.9999999999999996)
_COUNT_SLACK = 1e-9


@dataclass(frozen=True)
class TimeGrid:
    """Uniform output sampling of [t_start, t_end].

    Internal integration steps are adaptive and independent of this grid.
    """

    t_start: float
    t_end: float
    output_step: float

    @property
    def count(self) -> int:
        """Number of output points, t_start included."""
        span = (self.t_end - self.t_start) / self.output_step
        return math.floor(span + _COUNT_SLACK) + 1

    def points(self) -> npt.NDArray[np.float64]:
        """Output times t_start + k * output_step."""
        return self.t_start + np.arange(self.count, dtype=np.float64) * self.output_step

    def __len__(self) -> int:
        return self.count


def make_grid(t_start: float, t_end: float, output_step: float) -> TimeGrid:
    """Build a validated output grid.

    Raises:
        DomainError: If any bound is non-finite, the interval is empty or
            reversed, or the step is not positive.
    """
    for name, value in (
        ("t_start", t_start),
        ("t_end", t_end),
        ("output_step", output_step),
    ):
        if not math.isfinite(value):
            raise DomainError(f"{name} must be finite, got {value}")
    if output_step <= 0:
        raise DomainError(f"output_step must be positive, got {output_step}")
    if t_end <= t_start:
        raise DomainError(f"t_end ({t_end}) must exceed t_start ({t_start})")
    return TimeGrid(float(t_start), float(t_end), float(output_step))
