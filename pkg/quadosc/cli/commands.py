"""Subcommand implementations. Each returns the process exit code."""

from __future__ import annotations

import argparse
import asyncio
import logging
import math
import sys
from dataclasses import dataclass

import numpy as np

from ..common.coefficients import CoefficientSet
from ..common.errors import DomainError
from ..common.grid import TimeGrid, make_grid
from ..common.series import ErmakovSeries, HamiltonPairSeries, OscillatorSeries, RiccatiSeries, to_polar
from ..common.states import EnvelopeConvention, WaveguideParams
from ..physics.fluctuations import (
    fluctuations_from_series,
    squeeze_envelope,
    waveguide_fluctuations_closed_form,
)
from ..physics.frequency import FrequencyProfile, waveguide_frequency_profile
from ..physics.invariants import relative_saturation_residual
from ..physics.transforms import (
    effective_frequency_from_mass,
    epsilon_to_ermakov,
    epsilon_to_riccati,
    ermakov_sample_residual,
    ermakov_to_epsilon,
    hamilton_pair_sample_residual,
    hamilton_pair_series_from_epsilon,
    hamilton_pair_to_epsilon,
    mass_series_to_epsilon,
    oscillator_sample_residual,
    riccati_from_samples,
    riccati_residual_to_oscillator,
    riccati_to_epsilon,
)
from ..physics.waveguide import (
    ValidationTolerances,
    closed_form_epsilon,
    closed_form_series,
    cross_validate,
    fluct_check,
)
from ..solver.dynamics import integrate_oscillator
from ..solver.integrator import IntegratorConfig
from .io import read_table, require_columns, write_lines, write_table

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VALIDATION_FAILED = 1

SIMULATE_COLUMNS = (
    "t",
    "eps_re",
    "eps_im",
    "deps_re",
    "deps_im",
    "rho",
    "phase",
    "omega2",
    "sigma_q2",
    "sigma_p2",
    "c_qp2",
    "wronskian_drift",
    "saturation_residual",
)

SWEEP_COLUMNS = (
    "s",
    "min_squeeze_ratio",
    "closed_form_min_squeeze_ratio",
    "max_saturation_residual",
    "max_wronskian_drift",
    "max_fluct_mismatch",
)

EPSILON_COLUMNS = ("t", "eps_re", "eps_im", "deps_re", "deps_im")


@dataclass(frozen=True)
class Scenario:
    """Coefficients, frequency and closed-form parameters of one run."""

    name: str
    params: WaveguideParams
    coeffs: CoefficientSet
    freq: FrequencyProfile


def build_scenario(args: argparse.Namespace) -> Scenario:
    """Scenario from --scenario, --omega, --s, --hbar and --envelope.

    The stationary scenario is the waveguide with s = 0.
    """
    envelope = EnvelopeConvention.from_name(args.envelope)
    if args.scenario == "stationary":
        if args.s != 0.0:
            logger.info("stationary scenario ignores s=%r", args.s)
        params = WaveguideParams(args.omega, 0.0, args.hbar, envelope)
        return Scenario(
            "stationary",
            params,
            CoefficientSet.stationary(args.omega),
            FrequencyProfile.constant(args.omega**2),
        )
    if args.scenario == "waveguide":
        params = WaveguideParams(args.omega, args.s, args.hbar, envelope)
        return Scenario(
            "waveguide", params, CoefficientSet.waveguide(params), waveguide_frequency_profile(params)
        )
    raise DomainError(f"unknown scenario '{args.scenario}'")


def integrator_config(args: argparse.Namespace) -> IntegratorConfig:
    return IntegratorConfig(rel_tol=args.rel_tol, abs_tol=args.abs_tol, method=args.method)


def build_grid(args: argparse.Namespace) -> TimeGrid:
    return make_grid(args.t_start, args.t_max, args.step)


def cmd_simulate(args: argparse.Namespace) -> int:
    """Integrate the oscillator from closed-form initial data and write the time series."""
    scenario = build_scenario(args)
    grid = build_grid(args)
    cfg = integrator_config(args)

    init = closed_form_epsilon(scenario.params, grid.t_start)
    series = integrate_oscillator(scenario.freq, init, grid, cfg)
    polar = to_polar(series)
    records = fluctuations_from_series(scenario.coeffs, series, scenario.params.hbar)
    omega2 = scenario.freq.sample(series.t)
    drift = series.wronskian_drift()

    rows = [
        (
            series.t[k],
            series.eps[k].real,
            series.eps[k].imag,
            series.deps[k].real,
            series.deps[k].imag,
            polar.rho[k],
            polar.phase[k],
            omega2[k],
            rec.sigma_q2,
            rec.sigma_p2,
            rec.c_qp2,
            drift[k],
            rec.saturation_residual,
        )
        for k, rec in enumerate(records)
    ]
    write_table(args.out, SIMULATE_COLUMNS, rows, args.format)
    logger.info("simulate: %d samples, max Wronskian drift %.3e", len(rows), float(np.max(drift)))
    return EXIT_OK


def validation_tolerances(args: argparse.Namespace) -> ValidationTolerances:
    """Defaults with the --tol-* overrides applied, then tightened by --strict."""
    defaults = ValidationTolerances()
    tols = ValidationTolerances(
        ode=args.tol_ode if args.tol_ode is not None else defaults.ode,
        wronskian=args.tol_wronskian if args.tol_wronskian is not None else defaults.wronskian,
        fluct=args.tol_fluct if args.tol_fluct is not None else defaults.fluct,
        omega=args.tol_omega if args.tol_omega is not None else defaults.omega,
        saturation=defaults.saturation,
    )
    return tols.strict() if args.strict else tols


def cmd_validate(args: argparse.Namespace) -> int:
    """Cross-validate the closed form; exit 0 iff every check passes."""
    scenario = build_scenario(args)
    report = cross_validate(
        scenario.params, build_grid(args), integrator_config(args), validation_tolerances(args)
    )
    lines = report.to_lines()
    write_lines(args.out, lines)
    if report.passed:
        logger.info("validate: passed")
        return EXIT_OK
    if args.out is not None:
        # the report went to a file; still show the failing residuals
        for name, result, tolerance in report.checks():
            if name in report.failures:
                print(f"{name}: {result.value!r} >= {tolerance!r} at t={result.t_worst!r}", file=sys.stderr)
    return EXIT_VALIDATION_FAILED


# transform


def _riccati_input(
    table: dict[str, np.ndarray], path: str, cfg: IntegratorConfig
) -> RiccatiSeries:
    t, c1_re, c1_im, a1p, a2p, a3p = require_columns(
        table, ("t", "c1_re", "c1_im", "a1p", "a2p", "a3p"), path
    )
    if "da3p" not in table and len(t) < 3:
        raise DomainError(f"'{path}' needs a da3p column or at least three rows")
    da3p = table["da3p"] if "da3p" in table else np.gradient(a3p, t, edge_order=2)
    return riccati_from_samples(t, c1_re + 1j * c1_im, a1p, a2p, a3p, da3p, cfg)


def _epsilon_input(table: dict[str, np.ndarray], path: str) -> OscillatorSeries:
    t, eps_re, eps_im, deps_re, deps_im = require_columns(table, EPSILON_COLUMNS, path)
    return OscillatorSeries(t, eps_re + 1j * eps_im, deps_re + 1j * deps_im)


def _epsilon_rows(series: OscillatorSeries, residual: np.ndarray) -> list[tuple[float, ...]]:
    return [
        (
            series.t[k],
            series.eps[k].real,
            series.eps[k].imag,
            series.deps[k].real,
            series.deps[k].imag,
            residual[k],
        )
        for k in range(len(series))
    ]


def _to_epsilon(source: str, table: dict[str, np.ndarray], args: argparse.Namespace) -> list[tuple[float, ...]]:
    path = args.input
    if source == "riccati":
        riccati = _riccati_input(table, path, integrator_config(args))
        series = riccati_to_epsilon(riccati, args.m0omega0)
        residual = np.abs(riccati_residual_to_oscillator(riccati, args.m0omega0))
        return _epsilon_rows(series, residual)

    if source == "mass":
        t, f, df, m, dm = require_columns(table, ("t", "f", "df", "m", "dm"), path)
        series = mass_series_to_epsilon(t, f, df, m, dm)
        ddm = table["ddm"] if "ddm" in table else np.gradient(dm, t, edge_order=2)
        omega2 = table["omega2"] if "omega2" in table else build_scenario(args).freq.sample(t)
        effective = np.array(
            [
                effective_frequency_from_mass(float(omega2[k]), float(m[k]), float(dm[k]), float(ddm[k]))
                for k in range(len(t))
            ]
        )
        return _epsilon_rows(series, np.abs(oscillator_sample_residual(series, effective)))

    scenario = build_scenario(args)
    if source == "hamilton-pair":
        t, sigma, pi = require_columns(table, ("t", "sigma", "pi"), path)
        series = hamilton_pair_to_epsilon(
            scenario.coeffs, HamiltonPairSeries(t, sigma, pi), scenario.params.hbar, integrator_config(args)
        )
    elif source == "ermakov":
        t, rho, drho = require_columns(table, ("t", "rho", "drho"), path)
        series = ermakov_to_epsilon(ErmakovSeries(t, rho, drho), scenario.freq, integrator_config(args))
    else:
        raise DomainError(f"no transform from '{source}' to epsilon")
    residual = np.abs(oscillator_sample_residual(series, scenario.freq.sample(series.t)))
    return _epsilon_rows(series, residual)


def _from_epsilon(
    target: str, table: dict[str, np.ndarray], args: argparse.Namespace
) -> tuple[tuple[str, ...], list[tuple[float, ...]]]:
    series = _epsilon_input(table, args.input)
    scenario = build_scenario(args)

    if target == "riccati":
        riccati = epsilon_to_riccati(scenario.coeffs, series, integrator_config(args))
        residual = np.abs(riccati.riccati_residual())
        columns = (
            "t", "c1_re", "c1_im", "c2_re", "c2_im", "c3_re", "c3_im",
            "a1p", "a2p", "a3p", "da3p", "residual",
        )
        rows = [
            (
                riccati.t[k],
                riccati.c1[k].real, riccati.c1[k].imag,
                riccati.c2[k].real, riccati.c2[k].imag,
                riccati.c3[k].real, riccati.c3[k].imag,
                riccati.a1p[k], riccati.a2p[k], riccati.a3p[k], riccati.da3p[k],
                residual[k],
            )
            for k in range(len(riccati))
        ]
        return columns, rows

    if target == "hamilton-pair":
        pair = hamilton_pair_series_from_epsilon(scenario.coeffs, series, scenario.params.hbar)
        residual = np.abs(hamilton_pair_sample_residual(scenario.coeffs, pair, scenario.params.hbar))
        rows = [(pair.t[k], pair.sigma[k], pair.pi[k], residual[k]) for k in range(len(pair))]
        return ("t", "sigma", "pi", "residual"), rows

    if target == "ermakov":
        ermakov = epsilon_to_ermakov(series)
        residual = np.abs(ermakov_sample_residual(ermakov, scenario.freq.sample(ermakov.t)))
        rows = [(ermakov.t[k], ermakov.rho[k], ermakov.drho[k], residual[k]) for k in range(len(ermakov))]
        return ("t", "rho", "drho", "residual"), rows

    raise DomainError(f"no transform from epsilon to '{target}'")


def cmd_transform(args: argparse.Namespace) -> int:
    """Map a sampled series between equation forms and append a target-equation residual."""
    source, target = args.source, args.target
    if (source == "epsilon") == (target == "epsilon"):
        raise DomainError(f"exactly one of --from/--to must be epsilon, got {source} -> {target}")
    table = read_table(args.input)
    samples = len(next(iter(table.values())))
    if samples < 3:
        raise DomainError(f"'{args.input}' has {samples} sample(s); transforms need at least 3")
    if source != "epsilon":
        columns: tuple[str, ...] = EPSILON_COLUMNS + ("residual",)
        rows = _to_epsilon(source, table, args)
    else:
        columns, rows = _from_epsilon(target, table, args)
    write_table(args.out, columns, rows, args.format)
    logger.info("transform %s -> %s: %d samples", source, target, len(rows))
    return EXIT_OK


# sweep


def parse_s_range(text: str) -> list[float]:
    """lo:hi:step, inclusive of hi; lo == hi gives the single point lo.

    Raises:
        DomainError: If the range is malformed, reversed or has a non-positive step.
    """
    parts = text.split(":")
    if len(parts) != 3:
        raise DomainError(f"s-range must be lo:hi:step, got '{text}'")
    try:
        lo, hi, step = (float(p) for p in parts)
    except ValueError as exc:
        raise DomainError(f"s-range must be numeric, got '{text}'") from exc
    if not all(math.isfinite(x) for x in (lo, hi, step)):
        raise DomainError(f"s-range must be finite, got '{text}'")
    if lo == hi:
        return [lo]
    if hi < lo:
        raise DomainError(f"s-range upper bound {hi} is below lower bound {lo}")
    if not step > 0:
        raise DomainError(f"s-range step must be positive, got {step}")
    count = math.floor((hi - lo) / step + 1e-9) + 1
    return [round(lo + k * step, 12) for k in range(count)]


def sweep_row(
    params: WaveguideParams, grid: TimeGrid, cfg: IntegratorConfig
) -> tuple[float, float, float, float, float, float]:
    """Summary of one squeeze parameter; see SWEEP_COLUMNS."""
    coeffs = CoefficientSet.waveguide(params)
    closed = closed_form_series(params, grid)
    numeric = integrate_oscillator(waveguide_frequency_profile(params), closed[0], grid, cfg)
    records = fluctuations_from_series(coeffs, numeric, params.hbar)
    closed_records = [waveguide_fluctuations_closed_form(params, float(t)) for t in grid.points()]

    to_ratio = 2.0 * params.omega / params.hbar
    min_ratio = min(r.sigma_q2 for r in records) * to_ratio
    closed_min_ratio = min(squeeze_envelope(params, float(t)) for t in grid.points())
    return (
        params.s,
        min_ratio,
        closed_min_ratio,
        max(relative_saturation_residual(r, params.hbar) for r in records),
        float(np.max(numeric.wronskian_drift())),
        fluct_check(records, closed_records, params).value,
    )


async def _sweep_rows(
    values: list[float], args: argparse.Namespace, grid: TimeGrid, cfg: IntegratorConfig
) -> list[tuple[float, ...]]:
    envelope = EnvelopeConvention.from_name(args.envelope)
    params = [WaveguideParams(args.omega, s, args.hbar, envelope) for s in values]
    return list(await asyncio.gather(*(asyncio.to_thread(sweep_row, p, grid, cfg) for p in params)))


def cmd_sweep(args: argparse.Namespace) -> int:
    """One summary row per s, computed concurrently and written in input order."""
    values = parse_s_range(args.s_range)
    grid = build_grid(args)
    cfg = integrator_config(args)
    rows = asyncio.run(_sweep_rows(values, args, grid, cfg))
    write_table(args.out, SWEEP_COLUMNS, rows, args.format)
    logger.info("sweep: %d rows", len(rows))
    return EXIT_OK
