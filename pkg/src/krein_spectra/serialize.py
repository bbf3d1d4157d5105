"""CSV and JSON encoding of results.

Floats are written as the shortest decimal string that round-trips to
the same binary64 value (``repr``), in both formats.  JSON documents are
objects ``{"schema_version": "1", "kind": ..., "meta": {...}, "rows": [...]}``
and are emitted with a fixed layout, so decoding a document and encoding
it again reproduces the same bytes.
"""

import csv
import io
import json
import math

import numpy as np

from .asympt import PoleTable
from .specfn import SpectralSample
from .spectrum import EigenvalueStream

SCHEMA_VERSION = "1"


def number(x):
    """Round-trip decimal string of a real number (``inf``/``nan`` spelled out)."""
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return repr(x)


def _cell(x):
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        return number(x)
    return x


def _split(value):
    z = complex(value)
    return z.real, z.imag


def stream_rows(stream):
    signed = bool(np.any(stream.signs < 0))
    rows = []
    for rec in stream:
        row = {"n": rec.index}
        if signed:
            row["sign"] = rec.sign
        row["lambda"] = rec.value
        row.update(bracket_lo=rec.bracket.lo, bracket_hi=rec.bracket.hi,
                   residual=rec.residual)
        rows.append(row)
    return rows


def sample_rows(samples):
    samples = list(samples)
    complex_ = any(isinstance(s.value, complex) for s in samples)
    complex_arg = any(isinstance(s.argument, complex) for s in samples)
    rows = []
    for s in samples:
        row = {}
        if complex_arg:
            row["argument"], row["argument_imag"] = _split(s.argument)
        else:
            row["argument"] = s.argument
        if complex_:
            row["value"], row["value_imag"] = _split(s.value)
        else:
            row["value"] = s.value
        row.update(bound=s.bound, terms=s.terms)
        if s.negative_part:
            row["negative_part"] = [[number(m), number(p)] for m, p in s.negative_part]
        rows.append(row)
    return rows


def pole_rows(table):
    return [{"s": e.s, "residue": e.residue, "multiplicity": e.multiplicity,
             "source": e.source} for e in table]


def rows_of(result):
    """Plain row dictionaries for any supported result object."""
    if isinstance(result, EigenvalueStream):
        return stream_rows(result)
    if isinstance(result, PoleTable):
        return pole_rows(result)
    if isinstance(result, SpectralSample):
        return sample_rows([result])
    if isinstance(result, (list, tuple)) and all(isinstance(r, SpectralSample) for r in result):
        return sample_rows(result)
    if isinstance(result, (list, tuple)) and all(isinstance(r, dict) for r in result):
        return list(result)
    raise TypeError(f"cannot serialise {type(result).__name__}")


def default_columns(result):
    if isinstance(result, EigenvalueStream):
        signed = bool(np.any(result.signs < 0))
        return ["n"] + (["sign"] if signed else []) + ["lambda", "bracket_lo", "bracket_hi",
                                                        "residual"]
    if isinstance(result, PoleTable):
        return ["s", "residue", "multiplicity", "source"]
    return ["argument", "value", "bound", "terms"]


def to_csv(rows, columns):
    """CSV text with a header row and ``\\n`` line endings."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_csv_cell(row.get(c, "")) for c in columns])
    return buf.getvalue()


def _csv_cell(x):
    x = _cell(x)
    if isinstance(x, list):
        return ";".join(":".join(pair) for pair in x)
    return x


def document(kind, rows, meta=None):
    return {"schema_version": SCHEMA_VERSION, "kind": kind, "meta": dict(meta or {}),
            "rows": [{k: _json_cell(v) for k, v in row.items()} for row in rows]}


def _json_cell(x):
    x = _cell(x)
    if isinstance(x, (list, tuple)):
        return [_json_cell(v) for v in x]
    return x


def dumps(doc):
    """Canonical JSON text of a document."""
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def loads(text):
    doc = json.loads(text)
    if not isinstance(doc, dict) or doc.get("schema_version") != SCHEMA_VERSION:
        raise ValueError("not a schema version 1 document")
    return doc


def emit(result, fmt, kind=None, meta=None, columns=None):
    """Encode ``result`` as ``"csv"`` or ``"json"`` text."""
    rows = rows_of(result)
    if fmt == "csv":
        if columns is None:
            columns = list(dict.fromkeys(k for row in rows for k in row)) if rows \
                else default_columns(result)
        return to_csv(rows, columns)
    if fmt == "json":
        return dumps(document(kind or type(result).__name__, rows, meta))
    raise ValueError(f"unknown format {fmt!r}")
