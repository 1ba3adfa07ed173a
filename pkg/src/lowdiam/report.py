"""Report serialization: floats at 17 significant digits, atomic writes.

Reports are plain dicts. Floats are rendered with '%.17g' so a report can be
parsed back bit-for-bit; numpy scalars and arrays are converted on the way
out. Writes go through a temp file and os.replace so a crashed run never
leaves a half-written report behind.
"""

from __future__ import annotations

import csv
import io
import os
import tempfile

import numpy as np


def _fmt_float(x: float) -> str:
    if x != x:
        return "NaN"
    if x == float("inf"):
        return "Infinity"
    if x == float("-inf"):
        return "-Infinity"
    s = "%.17g" % x
    # Keep a float-looking token so round-tripping preserves the type.
    if "." not in s and "e" not in s and "E" not in s \
            and "n" not in s and "N" not in s:
        s += ".0"
    return s


def _json_escape(s: str) -> str:
    out = ['"']
    for ch in s:
        if ch == '"':
            out.append('\\"')
        elif ch == "\\":
            out.append("\\\\")
        elif ch == "\n":
            out.append("\\n")
        elif ch == "\t":
            out.append("\\t")
        elif ch == "\r":
            out.append("\\r")
        elif ord(ch) < 0x20:
            out.append("\\u%04x" % ord(ch))
        else:
            out.append(ch)
    out.append('"')
    return "".join(out)


def _render(obj, buf: list, indent: int, level: int) -> None:
    pad = " " * (indent * (level + 1))
    closepad = " " * (indent * level)
    if obj is None:
        buf.append("null")
    elif obj is True:
        buf.append("true")
    elif obj is False:
        buf.append("false")
    elif isinstance(obj, (int, np.integer)):
        buf.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        buf.append(_fmt_float(float(obj)))
    elif isinstance(obj, str):
        buf.append(_json_escape(obj))
    elif isinstance(obj, np.ndarray):
        _render(obj.tolist(), buf, indent, level)
    elif isinstance(obj, dict):
        if not obj:
            buf.append("{}")
            return
        buf.append("{\n")
        items = list(obj.items())
        for j, (k, v) in enumerate(items):
            buf.append(pad)
            buf.append(_json_escape(str(k)))
            buf.append(": ")
            _render(v, buf, indent, level + 1)
            buf.append(",\n" if j + 1 < len(items) else "\n")
        buf.append(closepad + "}")
    elif isinstance(obj, (list, tuple)):
        if not obj:
            buf.append("[]")
            return
        simple = all(isinstance(x, (int, float, np.integer, np.floating,
                                    str, bool, type(None))) for x in obj)
        if simple and len(obj) <= 16:
            buf.append("[")
            for j, x in enumerate(obj):
                _render(x, buf, indent, level + 1)
                if j + 1 < len(obj):
                    buf.append(", ")
            buf.append("]")
            return
        buf.append("[\n")
        for j, x in enumerate(obj):
            buf.append(pad)
            _render(x, buf, indent, level + 1)
            buf.append(",\n" if j + 1 < len(obj) else "\n")
        buf.append(closepad + "]")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def render_json(obj, indent: int = 2) -> str:
    buf: list = []
    _render(obj, buf, indent, 0)
    buf.append("\n")
    return "".join(buf)


def render_csv(rows, header) -> str:
    """Rows of scalars; floats go through the same 17-digit formatter."""
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt_float(float(x))
                    if isinstance(x, (float, np.floating)) else x
                    for x in row])
    return out.getvalue()


def write_atomic(path: str, text: str) -> None:
    """Write via a sibling temp file and rename into place."""
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-report-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def emit(obj, out: str | None, fmt: str = "json") -> str:
    """Render and either return (out=None) or atomically write the report."""
    if fmt == "json":
        text = render_json(obj)
    elif fmt == "csv":
        if not (isinstance(obj, dict) and "rows" in obj and "header" in obj):
            raise TypeError("csv output needs {'header': [...], 'rows': [...]}")
        text = render_csv(obj["rows"], obj["header"])
    else:
        raise ValueError(f"unknown format {fmt!r}")
    if out is not None:
        write_atomic(out, text)
    return text
