"""CSV / JSON serialization of result tables.

CSV files start with ``# key = value`` comment lines carrying table metadata
(gnuplot skips them), then a header row, then data.  Floats are written in
scientific notation with 17 significant digits so they re-parse bit-exactly.
"""

from __future__ import annotations

import csv
import io
import json
import math

import numpy as np

from .analysis import Table

__all__ = ["format_value", "dumps", "read_csv", "read_json", "FORMATS"]

FORMATS = ("csv", "json")


def format_value(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if not math.isfinite(value):
            return repr(value)
        return f"{value:.16e}"
    return str(value)


def _plain(value):
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    return value


def dumps(table: Table, fmt: str) -> str:
    if fmt == "csv":
        buf = io.StringIO()
        for key, val in table.meta.items():
            buf.write(f"# {key} = {format_value(val)}\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(table.columns)
        for row in table.rows:
            writer.writerow([format_value(v) for v in row])
        return buf.getvalue()
    if fmt == "json":
        payload = {
            "meta": {k: _plain(v) for k, v in table.meta.items()},
            "columns": list(table.columns),
            "rows": [{c: _plain(v) for c, v in zip(table.columns, row)} for row in table.rows],
        }
        return json.dumps(payload, indent=2) + "\n"
    raise ValueError(f"unknown format {fmt!r}; expected one of {FORMATS}")


def _parse(cell: str):
    if cell in ("true", "false"):
        return cell == "true"
    try:
        value = int(cell)
    except ValueError:
        pass
    else:
        # bitstrings such as "001" stay text
        if str(value) == cell:
            return value
        return cell
    try:
        return float(cell)
    except ValueError:
        return cell


def read_csv(text: str, text_columns: tuple[str, ...] = ()) -> Table:
    """Parse CSV written by :func:`dumps`; cells in ``text_columns`` are kept as strings."""
    meta = {}
    lines = []
    for line in text.splitlines():
        if line.startswith("#"):
            key, _, val = line[1:].partition("=")
            meta[key.strip()] = _parse(val.strip())
        elif line:
            lines.append(line)
    reader = csv.reader(lines)
    columns = tuple(next(reader))
    keep = [c in text_columns for c in columns]
    rows = [tuple(c if k else _parse(c) for c, k in zip(row, keep)) for row in reader]
    return Table(columns, rows, meta)


def read_json(text: str) -> Table:
    payload = json.loads(text)
    columns = tuple(payload["columns"])
    rows = [tuple(rec[c] for c in columns) for rec in payload["rows"]]
    return Table(columns, rows, payload.get("meta", {}))
