"""Table and report files.

Floats are written in their shortest round-trip form, so identical runs give
byte-identical files.
"""

from __future__ import annotations

import csv
import io
import json
import sys
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
import numpy.typing as npt

from ..common.errors import DomainError

FORMATS = ("csv", "json")


def format_float(value: float) -> str:
    return repr(float(value))


def render_table(columns: Sequence[str], rows: Iterable[Sequence[float]], fmt: str) -> str:
    """CSV with one header row, or a JSON array of per-row objects."""
    if fmt == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([format_float(x) for x in row])
        return buffer.getvalue()
    if fmt == "json":
        records = [dict(zip(columns, (float(x) for x in row))) for row in rows]
        return json.dumps(records, indent=2) + "\n"
    raise DomainError(f"unknown output format '{fmt}'")


def _emit(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def write_table(
    path: str | None, columns: Sequence[str], rows: Iterable[Sequence[float]], fmt: str = "csv"
) -> None:
    """Write a table to path, or to stdout when path is None."""
    _emit(render_table(columns, rows, fmt), path)


def write_lines(path: str | None, lines: Sequence[str]) -> None:
    _emit("".join(f"{line}\n" for line in lines), path)


def _columns_from_records(records: object, path: str) -> dict[str, list[float]]:
    if not isinstance(records, list) or not records:
        raise DomainError(f"'{path}' holds no samples")
    columns: dict[str, list[float]] = {}
    for k, record in enumerate(records):
        if not isinstance(record, dict):
            raise DomainError(f"'{path}': sample {k} is not an object")
        if k == 0:
            columns = {name: [] for name in record}
        if set(record) != set(columns):
            raise DomainError(f"'{path}': sample {k} has different fields")
        for name, value in record.items():
            columns[name].append(value)
    return columns


def _columns_from_csv(text: str, path: str) -> dict[str, list[str]]:
    rows = [row for row in csv.reader(io.StringIO(text)) if row]
    if len(rows) < 2:
        raise DomainError(f"'{path}' holds no samples")
    header = [name.strip() for name in rows[0]]
    columns: dict[str, list[str]] = {name: [] for name in header}
    for line, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise DomainError(f"'{path}' line {line}: expected {len(header)} fields, got {len(row)}")
        for name, value in zip(header, row):
            columns[name].append(value)
    return columns


def read_table(path: str) -> dict[str, npt.NDArray[np.float64]]:
    """Read a CSV (header row) or JSON (array of objects) table into float columns.

    Raises:
        DomainError: If the file is missing, empty or not numeric.
    """
    source = Path(path)
    try:
        text = source.read_text()
    except OSError as exc:
        raise DomainError(f"cannot read '{path}': {exc.strerror}") from exc

    raw: dict[str, list[float]] | dict[str, list[str]]
    if source.suffix.lower() == ".json":
        try:
            raw = _columns_from_records(json.loads(text), path)
        except json.JSONDecodeError as exc:
            raise DomainError(f"'{path}' is not valid JSON: {exc.msg}") from exc
    else:
        raw = _columns_from_csv(text, path)

    table: dict[str, npt.NDArray[np.float64]] = {}
    for name, values in raw.items():
        try:
            table[name] = np.array([float(v) for v in values], dtype=np.float64)
        except (TypeError, ValueError) as exc:
            raise DomainError(f"'{path}': column '{name}' is not numeric") from exc
    return table


def require_columns(
    table: dict[str, npt.NDArray[np.float64]], names: Sequence[str], path: str
) -> list[npt.NDArray[np.float64]]:
    missing = [name for name in names if name not in table]
    if missing:
        raise DomainError(f"'{path}' lacks column(s) {', '.join(missing)}")
    return [table[name] for name in names]
