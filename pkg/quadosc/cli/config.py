"""Flat key=value run configuration.

Keys are flag names with or without leading dashes; '-' and '_' are
interchangeable. Values become parser defaults, so explicit flags win.
"""

from __future__ import annotations

import argparse
from pathlib import Path

from ..common.errors import DomainError

_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}


def normalize_key(key: str) -> str:
    return key.strip().lstrip("-").replace("-", "_")


def load_config(path: str) -> dict[str, str]:
    """Parse a config file into {dest: raw value}.

    Raises:
        DomainError: If the file is unreadable or a line is not key=value.
    """
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise DomainError(f"cannot read config '{path}': {exc.strerror}") from exc

    values: dict[str, str] = {}
    for number, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep or not normalize_key(key):
            raise DomainError(f"config '{path}' line {number}: expected key=value")
        values[normalize_key(key)] = value.strip()
    return values


def apply_config(parser: argparse.ArgumentParser, values: dict[str, str]) -> None:
    """Install config values as defaults of parser.

    Raises:
        DomainError: If a key names no option of parser or a switch gets a non-boolean.
    """
    actions = {action.dest: action for action in parser._actions}
    # flag spellings such as --from resolve to their dest
    for action in parser._actions:
        for option in action.option_strings:
            actions.setdefault(normalize_key(option), action)
    defaults: dict[str, object] = {}
    for key, raw in values.items():
        action = actions.get(key)
        if action is None or action.dest in ("help", "config"):
            raise DomainError(f"unknown config key '{key}'")
        key = action.dest
        if isinstance(action, argparse._StoreTrueAction):
            lowered = raw.lower()
            if lowered not in _TRUE | _FALSE:
                raise DomainError(f"config key '{key}' expects a boolean, got '{raw}'")
            defaults[key] = lowered in _TRUE
        else:
            # argparse converts string defaults with the option's type
            defaults[key] = raw
        # a configured value satisfies a required flag
        action.required = False
    parser.set_defaults(**defaults)
