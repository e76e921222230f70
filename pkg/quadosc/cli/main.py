"""Command-line entry point."""

from __future__ import annotations

import argparse
import logging
import sys
from typing import Callable, Sequence

from ..common.constants import DEFAULT_ABS_TOL, DEFAULT_HBAR, DEFAULT_METHOD, DEFAULT_REL_TOL, SUPPORTED_METHODS
from ..common.errors import (
    DegenerateTransformError,
    DomainError,
    IntegrationError,
    NonFiniteError,
    QuadratureError,
)
from .commands import cmd_simulate, cmd_sweep, cmd_transform, cmd_validate
from .config import apply_config, load_config
from .io import FORMATS

logger = logging.getLogger(__name__)

EXIT_INVALID = 2
EXIT_NUMERICAL = 3

Handler = Callable[[argparse.Namespace], int]


def setup_logging(log_file: str | None, verbose: bool) -> None:
    """Configure logging to stderr and an optional file."""
    handlers: list[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if log_file:
        handlers.append(logging.FileHandler(log_file))
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format="%(asctime)s [%(levelname)s] %(name)s: %(message)s",
        handlers=handlers,
        force=True,
    )


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--scenario",
        choices=("waveguide", "stationary"),
        default="waveguide",
        help="Coefficient set (default: waveguide)",
    )
    common.add_argument("--omega", type=float, default=1.0, help="Carrier frequency (default: 1)")
    common.add_argument("--s", type=float, default=0.0, help="Squeeze rate, 2s < omega (default: 0)")
    common.add_argument("--hbar", type=float, default=DEFAULT_HBAR, help="Planck constant (default: 1)")
    common.add_argument(
        "--envelope",
        choices=("exact", "half-rate"),
        default="exact",
        help="Closed-form squeeze envelope (default: exact)",
    )
    common.add_argument("--t-start", type=float, default=0.0, help="First output time (default: 0)")
    common.add_argument("--t-max", type=float, default=10.0, help="Last output time (default: 10)")
    common.add_argument("--step", type=float, default=0.01, help="Output spacing (default: 0.01)")
    common.add_argument("--rel-tol", type=float, default=DEFAULT_REL_TOL, help="Integrator relative tolerance")
    common.add_argument("--abs-tol", type=float, default=DEFAULT_ABS_TOL, help="Integrator absolute tolerance")
    common.add_argument(
        "--method",
        choices=SUPPORTED_METHODS,
        default=DEFAULT_METHOD,
        help=f"Embedded Runge-Kutta pair (default: {DEFAULT_METHOD})",
    )
    common.add_argument("--out", help="Output file (default: stdout)")
    common.add_argument("--format", choices=FORMATS, default="csv", help="Output format (default: csv)")
    common.add_argument("--config", help="key=value file of option defaults")
    common.add_argument("--log-file", help="Log file path (in addition to stderr)")
    common.add_argument("--verbose", action="store_true", help="Debug logging")
    return common


def build_parser() -> tuple[argparse.ArgumentParser, dict[str, argparse.ArgumentParser]]:
    """Top-level parser and its subcommand parsers by name."""
    parser = argparse.ArgumentParser(
        prog="quadosc",
        description="Quadratic Hamiltonians through the nonstationary classical oscillator",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    common = _common_options()

    simulate = subparsers.add_parser("simulate", parents=[common], help="Integrate and write a time series")
    simulate.set_defaults(handler=cmd_simulate)

    validate = subparsers.add_parser(
        "validate", parents=[common], help="Cross-validate the waveguide closed form"
    )
    validate.add_argument("--strict", action="store_true", help="Tighten every tolerance by 100x")
    validate.add_argument("--tol-ode", type=float, help="ODE residual tolerance")
    validate.add_argument("--tol-wronskian", type=float, help="Wronskian drift tolerance")
    validate.add_argument("--tol-fluct", type=float, help="Fluctuation mismatch tolerance")
    validate.add_argument("--tol-omega", type=float, help="Omega^2 consistency tolerance")
    validate.set_defaults(handler=cmd_validate)

    transform = subparsers.add_parser("transform", parents=[common], help="Map a series between equation forms")
    forms = ("epsilon", "riccati", "mass", "hamilton-pair", "ermakov")
    transform.add_argument("--from", dest="source", choices=forms, required=True, help="Input form")
    transform.add_argument("--to", dest="target", choices=forms, default="epsilon", help="Output form")
    transform.add_argument("--in", dest="input", required=True, help="Input series file (CSV or .json)")
    transform.add_argument("--m0omega0", type=float, default=1.0, help="Riccati normalization (default: 1)")
    transform.set_defaults(handler=cmd_transform)

    sweep = subparsers.add_parser("sweep", parents=[common], help="Summarize runs over a range of s")
    sweep.add_argument("--s-range", required=True, help="lo:hi:step")
    sweep.set_defaults(handler=cmd_sweep)

    return parser, {
        "simulate": simulate,
        "validate": validate,
        "transform": transform,
        "sweep": sweep,
    }


def _config_path(argv: Sequence[str]) -> str | None:
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    return known.config


def run(argv: Sequence[str] | None = None) -> int:
    """Parse argv, run the subcommand and map errors to exit codes."""
    argv = list(sys.argv[1:] if argv is None else argv)
    parser, subcommands = build_parser()

    try:
        config_path = _config_path(argv)
        if config_path is not None:
            values = load_config(config_path)
            command = next((a for a in argv if a in subcommands), None)
            if command is not None:
                apply_config(subcommands[command], values)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID

    args = parser.parse_args(argv)
    setup_logging(args.log_file, args.verbose)
    handler: Handler = args.handler

    try:
        return handler(args)
    except DegenerateTransformError as exc:
        logger.error("%s", exc)
        return EXIT_NUMERICAL
    except DomainError as exc:
        logger.error("%s", exc)
        return EXIT_INVALID
    except (IntegrationError, NonFiniteError, QuadratureError) as exc:
        logger.error("%s", exc)
        return EXIT_NUMERICAL


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
