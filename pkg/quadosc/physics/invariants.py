"""Linear and quadratic invariants and the identities they satisfy."""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..common.coefficients import CoefficientSet, CoefficientValues
from ..common.errors import DomainError
from ..common.states import (
    FluctuationRecord,
    HamiltonPairState,
    OscillatorState,
    TrajectoryState,
)


def invariant_bracket(v: CoefficientValues, eps: complex, deps: complex) -> complex:
    """X = b eps - deps/2 - (da/4a) eps, shared by the invariant and the moments."""
    return v.b * eps - 0.5 * deps - (v.da / (4.0 * v.a)) * eps


@dataclass(frozen=True)
class LinearInvariantCoefficients:
    """A = p_coeff * p + q_coeff * q at time t."""

    t: float
    p_coeff: complex
    q_coeff: complex


@dataclass(frozen=True)
class QuadraticCombination:
    """Constants alpha1..alpha6 of a1 conj(A)^2 + a2 conj(A) A + a3 A^2 + a4 conj(A) + a5 A + a6."""

    alpha: tuple[complex, complex, complex, complex, complex, complex]

    def __post_init__(self) -> None:
        if len(self.alpha) != 6:
            raise DomainError(f"a quadratic combination has 6 constants, got {len(self.alpha)}")


def linear_invariant_coeffs(
    coeffs: CoefficientSet, state: OscillatorState, hbar: float
) -> LinearInvariantCoefficients:
    """Coefficients of the linear invariant built from eps.

    p_coeff = i a eps / sqrt(hbar a) and q_coeff = i X / sqrt(hbar a).

    Raises:
        DomainError: If a(t) <= 0.
    """
    v = coeffs.evaluate(state.t)
    scale = 1j / math.sqrt(hbar * v.a)
    return LinearInvariantCoefficients(
        t=state.t,
        p_coeff=scale * v.a * state.eps,
        q_coeff=scale * invariant_bracket(v, state.eps, state.deps),
    )


def eval_linear_invariant(inv: LinearInvariantCoefficients, traj: TrajectoryState) -> complex:
    """Classical value p_coeff * p + q_coeff * q."""
    if not math.isclose(inv.t, traj.t, rel_tol=1e-12, abs_tol=1e-12):
        raise DomainError(f"invariant at t={inv.t} evaluated on a trajectory point at t={traj.t}")
    return inv.p_coeff * traj.p + inv.q_coeff * traj.q


def eval_quadratic_invariant(combo: QuadraticCombination, a_value: complex) -> complex:
    a1, a2, a3, a4, a5, a6 = combo.alpha
    conj = a_value.conjugate()
    return a1 * conj * conj + a2 * conj * a_value + a3 * a_value * a_value + a4 * conj + a5 * a_value + a6


def wronskian(state: OscillatorState) -> complex:
    """deps * conj(eps) - eps * conj(deps); purely imaginary."""
    return state.deps * state.eps.conjugate() - state.eps * state.deps.conjugate()


def commutator(inv: LinearInvariantCoefficients, hbar: float) -> complex:
    """[A, A^dagger] from the coefficients; equals -(i/2) W."""
    p, q = inv.p_coeff, inv.q_coeff
    return -1j * hbar * (p * q.conjugate() - p.conjugate() * q)


def angular_momentum(state: OscillatorState) -> float:
    """eps1 deps2 - eps2 deps1 of the two-dimensional oscillator; W / 2i."""
    return state.eps.real * state.deps.imag - state.eps.imag * state.deps.real


def oscillator_lagrangian(state: OscillatorState, omega2: float) -> float:
    return 0.5 * abs(state.deps) ** 2 - 0.5 * omega2 * abs(state.eps) ** 2


def ermakov_residual(rho: float, drho: float, ddrho: float, omega2: float) -> float:
    """rho'' - 1/rho^3 + Omega^2 rho. drho is accepted for symmetry with the state."""
    if not rho > 0:
        raise DomainError(f"rho must be positive, got {rho}")
    return ddrho - 1.0 / rho**3 + omega2 * rho


def saturation_residual(rec: FluctuationRecord, hbar: float) -> float:
    """sigma_q^2 sigma_p^2 - c_qp^2 - hbar^2/4."""
    return rec.sigma_q2 * rec.sigma_p2 - rec.c_qp2 - 0.25 * hbar * hbar


def relative_saturation_residual(rec: FluctuationRecord, hbar: float) -> float:
    """|saturation_residual| relative to max(hbar^2/4, sigma_q^2 sigma_p^2)."""
    scale = max(0.25 * hbar * hbar, rec.sigma_q2 * rec.sigma_p2)
    return abs(saturation_residual(rec, hbar)) / scale


def classical_energy(coeffs: CoefficientSet, traj: TrajectoryState) -> float:
    """H0 = a p^2 + 2b q p + c q^2."""
    a, b, c = coeffs.abc(traj.t)
    return a * traj.p**2 + 2.0 * b * traj.q * traj.p + c * traj.q**2


def hamilton_pair_energy(coeffs: CoefficientSet, state: HamiltonPairState, hbar: float) -> float:
    """H1 = a (hbar^2/(4 sigma^2) + Pi^2) + 2b sigma Pi + c sigma^2."""
    sigma, pi = state.sigma, state.pi
    if not sigma > 0:
        raise DomainError(f"sigma must be positive, got {sigma}")
    a, b, c = coeffs.abc(state.t)
    return a * (hbar * hbar / (4.0 * sigma * sigma) + pi * pi) + 2.0 * b * sigma * pi + c * sigma * sigma


def mean_energy(
    coeffs: CoefficientSet,
    q: float,
    p: float,
    sigma: float,
    pi: float,
    hbar: float,
    t: float,
) -> float:
    """<H> of a Gaussian state: H0 of the means plus H1 of the widths."""
    return classical_energy(coeffs, TrajectoryState(t, q, p)) + hamilton_pair_energy(
        coeffs, HamiltonPairState(t, sigma, pi), hbar
    )
