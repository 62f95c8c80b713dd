"""Deterministic CSV / JSON emission of numeric tables.

Every number is written with 17 significant digits, which round-trips IEEE
doubles exactly; re-reading a table and writing it again reproduces it byte for
byte. CSV files start with one ``# epdyn <version>`` metadata line.
"""

import csv
import io
import json
import math

from . import __version__

FORMATS = ("csv", "json")


def fmt_number(x):
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"refusing to serialise non-finite value {x!r}")
    return format(x, ".17g")


def _fmt_cell(v):
    return v if isinstance(v, str) else fmt_number(v)


def metadata_line():
    return f"# epdyn {__version__}"


def to_csv(header, rows):
    buf = io.StringIO()
    buf.write(metadata_line() + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt_cell(v) for v in row])
    return buf.getvalue()


def to_json(header, rows):
    # hand-assembled so numbers keep the 17-digit format
    lines = []
    for row in rows:
        fields = ", ".join(
            f"{json.dumps(k)}: {json.dumps(v) if isinstance(v, str) else fmt_number(v)}"
            for k, v in zip(header, row)
        )
        lines.append("  {" + fields + "}")
    if not lines:
        return "[]\n"
    return "[\n" + ",\n".join(lines) + "\n]\n"


def render(header, rows, fmt):
    if fmt == "csv":
        return to_csv(header, rows)
    if fmt == "json":
        return to_json(header, rows)
    raise ValueError(f"unknown output format {fmt!r}")


def _parse_cell(s):
    try:
        return float(s)
    except ValueError:
        return s


def read_csv(text):
    """Parse a table written by :func:`to_csv`; returns ``(header, rows)``."""
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    reader = csv.reader(lines)
    header = next(reader)
    rows = [[_parse_cell(c) for c in row] for row in reader]
    return header, rows


def read_json(text):
    records = json.loads(text)
    if not records:
        return [], []
    header = list(records[0])
    return header, [[rec[k] for k in header] for rec in records]
