"""Tests for key=value run configuration."""

from __future__ import annotations

from typing import Callable

import pytest

from quadosc.cli.config import apply_config, load_config, normalize_key
from quadosc.cli.main import build_parser
from quadosc.common.errors import DomainError


class TestLoadConfig:
    """Tests for load_config()."""

    def test_parses_lines(self, write_config: Callable[[str], str]) -> None:
        path = write_config("# run\nomega = 2\n--t-max=5\n\nstrict=yes\n")
        assert load_config(path) == {"omega": "2", "t_max": "5", "strict": "yes"}

    def test_missing_separator(self, write_config: Callable[[str], str]) -> None:
        with pytest.raises(DomainError, match="line 1"):
            load_config(write_config("omega 2\n"))

    def test_missing_file(self) -> None:
        with pytest.raises(DomainError):
            load_config("/nonexistent/run.cfg")

    @pytest.mark.parametrize(("key", "expected"), [("--t-max", "t_max"), (" rel_tol ", "rel_tol"), ("s", "s")])
    def test_normalize_key(self, key: str, expected: str) -> None:
        assert normalize_key(key) == expected


class TestApplyConfig:
    """Tests for apply_config()."""

    def test_values_become_defaults(self) -> None:
        """Test string values are converted by the option type and flags still win."""
        _, subcommands = build_parser()
        validate = subcommands["validate"]
        apply_config(validate, {"omega": "2.5", "s": "0.3", "strict": "true"})
        args = validate.parse_args([])
        assert args.omega == 2.5
        assert args.strict is True
        assert validate.parse_args(["--s", "0.1"]).s == 0.1

    def test_unknown_key(self) -> None:
        _, subcommands = build_parser()
        with pytest.raises(DomainError, match="unknown config key"):
            apply_config(subcommands["simulate"], {"frobnicate": "1"})

    def test_switch_needs_boolean(self) -> None:
        _, subcommands = build_parser()
        with pytest.raises(DomainError):
            apply_config(subcommands["validate"], {"strict": "maybe"})

    def test_option_of_other_subcommand(self) -> None:
        """Test a validate-only key is rejected for simulate."""
        _, subcommands = build_parser()
        with pytest.raises(DomainError):
            apply_config(subcommands["simulate"], {"strict": "true"})

    @pytest.mark.parametrize(
        ("key", "dest", "value", "argv"),
        [
            ("from", "source", "riccati", ["--in", "x.csv"]),
            ("--to", "target", "ermakov", ["--from", "epsilon", "--in", "x.csv"]),
            ("in", "input", "run.csv", ["--from", "ermakov"]),
        ],
    )
    def test_flag_spelling_maps_to_dest(self, key: str, dest: str, value: str, argv: list[str]) -> None:
        """Test a key spelled as the flag reaches an option whose dest differs."""
        _, subcommands = build_parser()
        transform = subcommands["transform"]
        apply_config(transform, {normalize_key(key): value})
        assert getattr(transform.parse_args(argv), dest) == value

    def test_configured_required_flags(self) -> None:
        """Test --from and --in taken from the config no longer have to be given."""
        _, subcommands = build_parser()
        transform = subcommands["transform"]
        apply_config(transform, {"from": "riccati", "in": "riccati.csv"})
        args = transform.parse_args([])
        assert args.source == "riccati"
        assert args.input == "riccati.csv"
        assert transform.parse_args(["--from", "mass"]).source == "mass"
