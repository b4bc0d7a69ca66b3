"""Row emitters for markdown, CSV and JSON-lines reports."""

from __future__ import annotations

import csv
import io
import json
import math

FORMATS = ("markdown", "csv", "json-lines")


def fmt_num(v) -> str:
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, float):
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return f"{v:.12g}"
    return str(v)


def fmt_float(v: float) -> str:
    """Like fmt_num but always reads as a float: 4 -> "4.0"."""
    s = fmt_num(float(v))
    return s if any(c in s for c in ".eni") else s + ".0"


def _json_value(v):
    if isinstance(v, float):
        return float(f"{v:.12g}") if math.isfinite(v) else fmt_num(v)
    if isinstance(v, (list, tuple)):
        return [_json_value(x) for x in v]
    return v


def _cell(v) -> str:
    if isinstance(v, (list, tuple)):
        return " ".join(fmt_num(x) for x in v)
    return fmt_num(v)


def render(rows: list, columns: list, fmt: str = "markdown") -> str:
    if fmt == "json-lines":
        return "".join(json.dumps({c: _json_value(r.get(c)) for c in columns}) + "\n" for r in rows)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            w.writerow([_cell(r.get(c, "")) for c in columns])
        return buf.getvalue()
    if fmt != "markdown":
        raise ValueError(f"unknown format {fmt!r}")
    lines = ["| " + " | ".join(columns) + " |", "|" + "---|" * len(columns)]
    for r in rows:
        lines.append("| " + " | ".join(_cell(r.get(c, "")) for c in columns) + " |")
    return "\n".join(lines) + "\n"
