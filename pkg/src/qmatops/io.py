"""Matrix files and report documents.

Two input formats are accepted:

* CSV of real numbers, one matrix row per line (``#`` starts a comment);
* JSON ``{"rows": R, "cols": C, "data": [[re, im], ...]}`` with ``data`` in
  row-major order. Complex entries are only expressible in this form.
"""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path

import numpy as np

from .errors import QmatopsError


class ParseError(QmatopsError, ValueError):
    """Input file could not be read as a matrix."""


def parse_matrix_text(text: str, source: str = "<input>") -> np.ndarray:
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return _parse_structured(text, source)
    return _parse_csv(text, source)


def parse_matrix_file(path) -> np.ndarray:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror or exc}") from None
    return parse_matrix_text(text, str(path))


def _parse_csv(text, source):
    rows = []
    width = None
    for lineno, row in enumerate(csv.reader(io.StringIO(text)), 1):
        if not row or not "".join(row).strip() or row[0].lstrip().startswith("#"):
            continue
        values = []
        for col, cell in enumerate(row, 1):
            try:
                v = float(cell)
            except ValueError:
                raise ParseError(f"{source}:{lineno}:{col}: not a real number: {cell.strip()!r}") from None
            if not math.isfinite(v):
                raise ParseError(f"{source}:{lineno}:{col}: non-finite value")
            values.append(v)
        if width is None:
            width = len(values)
        elif len(values) != width:
            raise ParseError(f"{source}:{lineno}: row has {len(values)} entries, expected {width}")
        rows.append(values)
    if not rows:
        raise ParseError(f"{source}: no data rows")
    return np.array(rows, dtype=np.complex128)


def _parse_structured(text, source):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    return matrix_from_doc(doc, source)


def matrix_from_doc(doc, source: str = "<doc>") -> np.ndarray:
    try:
        rows, cols, data = int(doc["rows"]), int(doc["cols"]), doc["data"]
    except (KeyError, TypeError, ValueError):
        raise ParseError(f"{source}: expected keys 'rows', 'cols', 'data'") from None
    if rows < 1 or cols < 1:
        raise ParseError(f"{source}: rows and cols must be positive")
    if len(data) != rows * cols:
        raise ParseError(f"{source}: {len(data)} entries for a {rows}x{cols} matrix")
    out = np.empty(rows * cols, dtype=np.complex128)
    for i, pair in enumerate(data):
        try:
            re, im = pair
            out[i] = complex(float(re), float(im))
        except (TypeError, ValueError):
            raise ParseError(f"{source}: data[{i}] is not a [re, im] pair") from None
    return out.reshape(rows, cols)


def matrix_to_doc(m) -> dict:
    m = np.atleast_2d(np.asarray(m, dtype=np.complex128))
    return {
        "rows": int(m.shape[0]),
        "cols": int(m.shape[1]),
        "data": [[float(z.real), float(z.imag)] for z in m.reshape(-1)],
    }


def complex_pair(z) -> list[float] | None:
    if z is None:
        return None
    z = complex(z)
    return [float(z.real), float(z.imag)]


def as_vector(m: np.ndarray, source: str = "<input>") -> np.ndarray:
    """Accept a single row or a single column as a vector."""
    if m.shape[0] != 1 and m.shape[1] != 1:
        raise ParseError(f"{source}: expected a single row or column, got shape {m.shape}")
    return m.reshape(-1)


def dump_report(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _fmt_complex(pair) -> str:
    re, im = pair
    return f"{re!r}{'+' if im >= 0 or math.isnan(im) else '-'}{abs(im)!r}j"


def render_text(report: dict) -> str:
    """Aligned human-readable rendering of a report dictionary."""
    if report.get("command") == "analyze":
        return _render_table(report)
    lines = []
    width = max(len(k) for k in report)
    for key in sorted(report):
        value = report[key]
        if isinstance(value, dict) and "data" in value:
            lines.append(f"{key:<{width}} : {value['rows']}x{value['cols']} matrix")
            cols = value["cols"]
            for r in range(value["rows"]):
                cells = value["data"][r * cols : (r + 1) * cols]
                lines.append(" " * (width + 3) + "  ".join(_fmt_complex(c) for c in cells))
        elif isinstance(value, dict):
            lines.append(f"{key:<{width}} :")
            for sub in sorted(value):
                lines.append(f"  {sub:<{width - 2}} : {_fmt(value[sub])}")
        elif isinstance(value, list) and len(value) == 2 and key in ("recovered", "phase"):
            lines.append(f"{key:<{width}} : {_fmt_complex(value)}")
        elif isinstance(value, list):
            lines.append(f"{key:<{width}} : " + ", ".join(_fmt(v) for v in value))
        else:
            lines.append(f"{key:<{width}} : {_fmt(value)}")
    return "\n".join(lines) + "\n"


def _render_table(report: dict) -> str:
    cols = ["size", "depth", "toffoli", "width"]
    head = f"protocol={report['protocol']} convention={report['convention']}"
    rows = [[str(r[c]) for c in cols] for r in report["rows"]]
    widths = [max(len(c), *(len(r[i]) for r in rows)) if rows else len(c) for i, c in enumerate(cols)]
    out = [head, "  ".join(c.rjust(w) for c, w in zip(cols, widths))]
    out += ["  ".join(v.rjust(w) for v, w in zip(r, widths)) for r in rows]
    return "\n".join(out) + "\n"


def parse_text_report(text: str) -> dict:
    """Scalar ``key : value`` fields of a text report (numbers parsed as float)."""
    out = {}
    for line in text.splitlines():
        if not line or line.startswith(" "):
            continue
        key, sep, value = line.partition(" : ")
        if not sep:
            continue
        value = value.strip()
        try:
            out[key.strip()] = float(value)
        except ValueError:
            out[key.strip()] = value
    return out
