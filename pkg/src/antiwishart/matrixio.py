"""Matrix files and JSON reports.

JSON matrix schema (row-major)::

    {"field": "complex", "rows": R, "cols": C, "entries": [[re, im], ...]}
    {"field": "real",    "rows": R, "cols": C, "entries": [x, ...]}

CSV holds real matrices only, one row per line. Floats are written with 17
significant digits so that parsing a file back gives the same doubles.
"""

from __future__ import annotations

import csv
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from .config import Field


class MatrixFormatError(ValueError):
    """A matrix file or report does not parse or violates the schema."""


def format_float(x: float) -> str:
    x = float(x)
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    s = format(x, ".17g")
    if all(ch.isdigit() or ch == "-" for ch in s):
        s += ".0"
    return s


def dumps(obj, indent: int | None = 2) -> str:
    """JSON text with full-precision floats; numpy scalars and arrays are accepted."""
    return _encode(obj, indent, 0)


def _encode(obj, indent, level) -> str:
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, (list, tuple)):
        items = [_encode(v, indent, level + 1) for v in obj]
        if indent is None or all(not isinstance(v, (dict, list, tuple)) for v in obj):
            return "[" + ", ".join(items) + "]"
        pad = " " * (indent * (level + 1))
        return "[\n" + ",\n".join(pad + s for s in items) + "\n" + " " * (indent * level) + "]"
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        parts = [f"{json.dumps(str(k))}: {_encode(v, indent, level + 1)}" for k, v in obj.items()]
        if indent is None:
            return "{" + ", ".join(parts) + "}"
        pad = " " * (indent * (level + 1))
        return "{\n" + ",\n".join(pad + s for s in parts) + "\n" + " " * (indent * level) + "}"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def matrix_to_dict(m: np.ndarray, field: Field | str | None = None) -> dict:
    a = np.asarray(m)
    if a.ndim != 2:
        raise MatrixFormatError(f"expected a 2-D matrix, got shape {a.shape}")
    fld = Field.coerce(field, a)
    flat = a.reshape(-1)
    if fld is Field.COMPLEX:
        entries = [[float(z.real), float(z.imag)] for z in flat.astype(np.complex128)]
    else:
        if np.iscomplexobj(a) and np.any(a.imag != 0):
            raise MatrixFormatError("matrix has imaginary parts but field is real")
        entries = [float(x) for x in flat.real]
    return {"field": fld.value, "rows": a.shape[0], "cols": a.shape[1], "entries": entries}


def matrix_from_dict(d) -> np.ndarray:
    if not isinstance(d, dict):
        raise MatrixFormatError("matrix JSON must be an object")
    try:
        fld = Field(d["field"])
        rows, cols = int(d["rows"]), int(d["cols"])
        entries = d["entries"]
    except (KeyError, ValueError, TypeError) as exc:
        raise MatrixFormatError(f"bad matrix header: {exc}") from None
    if rows < 0 or cols < 0 or not isinstance(entries, list):
        raise MatrixFormatError("bad matrix shape or entries")
    if len(entries) != rows * cols:
        raise MatrixFormatError(f"declared shape {rows}x{cols} but {len(entries)} entries")
    try:
        if fld is Field.COMPLEX:
            if any(not isinstance(e, list) or len(e) != 2 for e in entries):
                raise MatrixFormatError("complex entries must be [re, im] pairs")
            vals = np.array([complex(float(re), float(im)) for re, im in entries], dtype=np.complex128)
        else:
            vals = np.array([float(e) for e in entries], dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise MatrixFormatError(f"bad matrix entry: {exc}") from None
    return vals.reshape(rows, cols)


def _resolve_format(path: str | None, fmt: str | None) -> str:
    if fmt:
        return fmt
    if path and path.lower().endswith(".csv"):
        return "csv"
    return "json"


def matrix_to_text(m: np.ndarray, fmt: str = "json", field: Field | str | None = None) -> str:
    if fmt == "csv":
        a = np.asarray(m)
        if Field.coerce(field, a) is Field.COMPLEX:
            raise MatrixFormatError("CSV holds real matrices only; use JSON for complex")
        return "".join(",".join(format_float(x) for x in row) + "\n" for row in a.real)
    return dumps(matrix_to_dict(m, field), indent=None) + "\n"


def matrix_from_text(text: str, fmt: str = "json") -> np.ndarray:
    if fmt == "csv":
        try:
            rows = [[float(x) for x in r] for r in csv.reader(io.StringIO(text)) if r]
        except ValueError as exc:
            raise MatrixFormatError(f"bad CSV entry: {exc}") from None
        if rows and any(len(r) != len(rows[0]) for r in rows):
            raise MatrixFormatError("ragged CSV rows")
        return np.array(rows, dtype=np.float64).reshape(len(rows), len(rows[0]) if rows else 0)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MatrixFormatError(f"invalid JSON: {exc}") from None
    return matrix_from_dict(data)


def read_matrix(path: str | None, fmt: str | None = None) -> tuple[np.ndarray, Field]:
    """Load a matrix from a file, or from standard input when ``path`` is None or '-'."""
    fmt = _resolve_format(path, fmt)
    text = sys.stdin.read() if path in (None, "-") else Path(path).read_text()
    m = matrix_from_text(text, fmt)
    if fmt == "csv":
        return m, Field.REAL
    return m, Field.of(m)


def write_text(path: str | None, text: str) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def write_matrix(path: str | None, m: np.ndarray, fmt: str | None = None, field=None) -> None:
    write_text(path, matrix_to_text(m, _resolve_format(path, fmt), field))
