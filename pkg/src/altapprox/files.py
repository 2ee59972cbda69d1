"""On-disk formats: expansion JSON files, sample tables and CSV output."""

from __future__ import annotations

import csv
import io
import json

import numpy as np

from .errors import SampleTableError
from .operators import Expansion, FuncSpec
from .quadrature import gauss_rule

SCHEMA_VERSION = 1
MATCH_TOL = 1e-12

_FIELDS = ("schema_version", "n", "basis", "constant", "coeffs", "provenance", "generator")


def _plain(obj):
    # numpy scalars and tuples are not JSON-native
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


def dumps_expansion(e):
    """Canonical JSON text for an expansion (fixed field order, sorted metadata)."""
    doc = {
        "schema_version": SCHEMA_VERSION,
        "n": e.n,
        "basis": e.basis,
        "constant": e.constant,
        "coeffs": list(e.coeffs),
        "provenance": e.provenance,
        "generator": _plain(e.meta),
    }
    # sort generator keys without disturbing the top-level order
    doc["generator"] = json.loads(json.dumps(doc["generator"], sort_keys=True))
    body = json.dumps(doc, indent=2)
    return body + "\n"


def loads_expansion(text):
    doc = json.loads(text)
    missing = [k for k in _FIELDS if k not in doc]
    if missing:
        raise ValueError(f"expansion file lacks fields: {', '.join(missing)}")
    if doc["schema_version"] != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema_version {doc['schema_version']!r}")
    return Expansion(int(doc["n"]), doc["constant"], tuple(doc["coeffs"]), doc["basis"],
                     doc["provenance"], dict(doc["generator"]))


def save_expansion(e, path):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps_expansion(e))


def load_expansion(path):
    with open(path, encoding="utf-8") as fh:
        return loads_expansion(fh.read())


def format_float(v):
    return "%.17g" % v


def write_csv(fh, header, columns):
    """One header row, then rows of ``%.17g`` values (columns of equal length)."""
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(header)
    for row in zip(*columns):
        w.writerow([format_float(v) for v in row])


def csv_text(header, columns):
    buf = io.StringIO()
    write_csv(buf, header, columns)
    return buf.getvalue()


class SampleTable:
    """Tabulated ``(x, f(x))`` pairs feeding the discrete operators."""

    def __init__(self, xs, fs):
        xs = np.asarray(xs, dtype=float)
        fs = np.asarray(fs, dtype=float)
        if xs.shape != fs.shape or xs.ndim != 1:
            raise SampleTableError("x and f columns differ in length")
        d = np.diff(xs)
        if np.any(d == 0):
            dup = xs[1:][d == 0]
            raise SampleTableError(f"duplicate abscissas: {', '.join(format_float(v) for v in dup)}")
        if np.any(d < 0):
            raise SampleTableError("abscissas must be strictly increasing")
        self.xs = xs
        self.fs = fs

    @classmethod
    def read(cls, fh):
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise SampleTableError("empty sample table") from None
        if header != ["x", "f"]:
            raise SampleTableError(f"sample table header must be 'x,f', got {','.join(header)!r}")
        xs, fs = [], []
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != 2:
                raise SampleTableError(f"line {lineno}: expected 2 fields, got {len(row)}")
            try:
                xs.append(float(row[0]))
                fs.append(float(row[1]))
            except ValueError:
                raise SampleTableError(f"line {lineno}: not a number: {row!r}") from None
        return cls(xs, fs)

    @classmethod
    def load(cls, path):
        with open(path, encoding="utf-8", newline="") as fh:
            return cls.read(fh)

    def required_abscissas(self, n):
        return np.concatenate([[0.0], gauss_rule(n).nodes, [1.0]])

    def _match(self, x):
        i = np.searchsorted(self.xs, x)
        best = None
        for j in (i - 1, i):
            if 0 <= j < len(self.xs) and abs(self.xs[j] - x) <= MATCH_TOL:
                best = j
        return best

    def missing(self, n):
        return [x for x in self.required_abscissas(n) if self._match(x) is None]

    def lookup(self, x):
        x = np.asarray(x, dtype=float)
        out = np.empty(x.shape)
        flat = out.reshape(-1)
        gone = []
        for i, v in enumerate(x.reshape(-1)):
            j = self._match(v)
            if j is None:
                gone.append(v)
            else:
                flat[i] = self.fs[j]
        if gone:
            raise SampleTableError(
                f"no sample at x = {', '.join(format_float(v) for v in gone)}", gone)
        return out

    def to_funcspec(self, n):
        """FuncSpec valid only at 0, 1 and the order-n Gauss nodes."""
        gone = self.missing(n)
        if gone:
            raise SampleTableError(
                f"sample table lacks {len(gone)} abscissa(s) needed for n={n}: "
                + ", ".join(format_float(v) for v in gone), gone)
        return FuncSpec(self.lookup, None, name="samples")


def sample_table_for(f, n):
    """Sample table at exactly the abscissas order ``n`` needs (handy for tests)."""
    xs = np.concatenate([[0.0], gauss_rule(n).nodes, [1.0]])
    return SampleTable(xs, f(xs))
