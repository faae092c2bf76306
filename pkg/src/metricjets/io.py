"""Exact JSON interchange documents for metric jets and h polynomials.

Layout::

    {
      "format": "metricjets.jet",
      "version": 1,
      "kind": "metric",            # or "hpoly"
      "dim": 2,
      "order": 4,
      "coefficients": {"1,1": {"0,0": "1", "0,2": "-1/3"}, "1,2": {...}, "2,2": {...}},
      "metadata": {"label": "..."}
    }

Metric keys are 1-based ``"i,j"`` with ``i <= j``; an ``hpoly`` document maps
exponent keys directly to values.  Exponent keys are comma-separated
exponent lists; values are canonical rational strings (``"3"``, ``"-2/7"``),
and zero coefficients are omitted.  :func:`dumps` writes keys in graded-lex
order, so documents it produces round-trip byte for byte.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any

from .errors import DocumentError, JetError
from .jet import JetScalar, grlex_key
from .metric import MetricJet

FORMAT = "metricjets.jet"
VERSION = 1

_RATIONAL = re.compile(r"-?(0|[1-9][0-9]*)(/[1-9][0-9]*)?")
_INDEX = re.compile(r"[0-9]+(,[0-9]+)*")


@dataclass
class JetDocument:
    kind: str
    dim: int
    order: int
    value: MetricJet | JetScalar
    metadata: dict[str, Any] = field(default_factory=dict)

    @classmethod
    def from_metric(cls, g: MetricJet, **metadata) -> JetDocument:
        return cls("metric", g.dim, g.order, g, dict(metadata))

    @classmethod
    def from_h(cls, h: JetScalar, **metadata) -> JetDocument:
        if h.dim != 2:
            raise DocumentError("an hpoly document needs a function of two variables")
        return cls("hpoly", 2, h.order, h, dict(metadata))


def format_rational(q: Fraction) -> str:
    return str(q)


def parse_rational(text: Any, where: str) -> Fraction:
    if not isinstance(text, str):
        raise DocumentError(f"{where}: rational must be a string like \"-3/4\", got {json.dumps(text)}")
    if not _RATIONAL.fullmatch(text):
        raise DocumentError(f"{where}: malformed rational {text!r}")
    q = Fraction(text)
    if str(q) != text:
        raise DocumentError(f"{where}: non-canonical rational {text!r} (write {str(q)!r})")
    if not q:
        raise DocumentError(f"{where}: zero coefficients must be omitted")
    return q


def _index(text: str, length: int, where: str, base: int = 0) -> tuple[int, ...]:
    if not _INDEX.fullmatch(text):
        raise DocumentError(f"{where}: malformed index key {text!r}")
    idx = tuple(int(t) - base for t in text.split(","))
    if len(idx) != length:
        raise DocumentError(f"{where}: key {text!r} needs {length} entries")
    if base and any(i < 0 for i in idx):
        raise DocumentError(f"{where}: indices are 1-based")
    return idx


class _Object(dict):
    """JSON object that remembers keys given more than once."""

    duplicates: tuple[str, ...] = ()


def _record_duplicates(pairs) -> _Object:
    out, dups = _Object(), []
    for k, v in pairs:
        if k in out:
            dups.append(k)
        out[k] = v
    out.duplicates = tuple(dups)
    return out


def _check_duplicates(obj: Any, where: str) -> None:
    dups = getattr(obj, "duplicates", ())
    if dups:
        raise DocumentError(f"{where}: duplicate key {json.dumps(dups[0])}")


def _series(table: Any, dim: int, order: int, where: str) -> JetScalar:
    if not isinstance(table, dict):
        raise DocumentError(f"{where}: expected an object of exponent keys")
    _check_duplicates(table, where)
    coeffs = {}
    for key, val in table.items():
        spot = f"{where}[{json.dumps(key)}]"
        alpha = _index(key, dim, spot)
        if sum(alpha) > order:
            raise DocumentError(f"{spot}: degree {sum(alpha)} is above the document order {order}")
        coeffs[alpha] = parse_rational(val, spot)
    return JetScalar(dim, order, coeffs)


def _load_dict(data: Any) -> JetDocument:
    if not isinstance(data, dict):
        raise DocumentError("document must be a JSON object")
    _check_duplicates(data, "document")
    if data.get("format") != FORMAT:
        raise DocumentError(f"\"format\": expected {FORMAT!r}, got {data.get('format')!r}")
    if data.get("version") != VERSION:
        raise DocumentError(f"\"version\": unsupported version {data.get('version')!r}")
    unknown = set(data) - {"format", "version", "kind", "dim", "order", "coefficients", "metadata"}
    if unknown:
        raise DocumentError(f"unknown top-level keys {sorted(unknown)}")
    kind, dim, order = data.get("kind"), data.get("dim"), data.get("order")
    if kind not in ("metric", "hpoly"):
        raise DocumentError(f"\"kind\": expected \"metric\" or \"hpoly\", got {kind!r}")
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise DocumentError(f"\"dim\": expected a positive integer, got {dim!r}")
    if not isinstance(order, int) or isinstance(order, bool) or order < 0:
        raise DocumentError(f"\"order\": expected a non-negative integer, got {order!r}")
    metadata = data.get("metadata", {})
    if not isinstance(metadata, dict):
        raise DocumentError("\"metadata\": expected an object")
    table = data.get("coefficients")
    if not isinstance(table, dict):
        raise DocumentError("\"coefficients\": expected an object")
    _check_duplicates(table, "coefficients")
    if kind == "hpoly":
        if dim != 2:
            raise DocumentError("\"dim\": hpoly documents are 2-dimensional")
        return JetDocument(kind, dim, order, _series(table, dim, order, "coefficients"), metadata)
    entries: dict[tuple[int, int], JetScalar] = {}
    for key, sub in table.items():
        where = f"coefficients[{json.dumps(key)}]"
        i, j = _index(key, 2, where, base=1)
        if i >= dim or j >= dim:
            raise DocumentError(f"{where}: index out of range for dimension {dim}")
        series = _series(sub, dim, order, where)
        ij = (min(i, j), max(i, j))
        if ij in entries:
            if entries[ij] != series:
                raise DocumentError(f"{where}: asymmetric metric entries ({i + 1},{j + 1}) and ({j + 1},{i + 1})")
            continue
        entries[ij] = series
    missing = [f"{i + 1},{j + 1}" for i in range(dim) for j in range(i, dim) if (i, j) not in entries]
    if missing:
        raise DocumentError(f"\"coefficients\": missing metric entries {missing}")
    try:
        g = MetricJet(entries)
    except JetError as exc:
        raise DocumentError(f"\"coefficients\": {exc}") from None
    return JetDocument(kind, dim, order, g, metadata)


def loads(text: str) -> JetDocument:
    try:
        data = json.loads(text, object_pairs_hook=_record_duplicates)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return _load_dict(data)


def load(path: str | Path) -> JetDocument:
    path = Path(path)
    try:
        return loads(path.read_text(encoding="utf-8"))
    except DocumentError as exc:
        raise DocumentError(f"{path}: {exc}") from None


def _table(s: JetScalar) -> dict[str, str]:
    return {",".join(map(str, a)): format_rational(c) for a, c in sorted(s.coeffs.items(), key=lambda t: grlex_key(t[0]))}


def to_dict(doc: JetDocument) -> dict[str, Any]:
    if doc.kind == "hpoly":
        coefficients = _table(doc.value)
    else:
        coefficients = {f"{i + 1},{j + 1}": _table(v) for (i, j), v in doc.value.items()}
    out = {
        "format": FORMAT,
        "version": VERSION,
        "kind": doc.kind,
        "dim": doc.dim,
        "order": doc.order,
        "coefficients": coefficients,
    }
    if doc.metadata:
        out["metadata"] = {k: doc.metadata[k] for k in sorted(doc.metadata)}
    return out


def dumps(doc: JetDocument) -> str:
    return json.dumps(to_dict(doc), indent=2, ensure_ascii=False) + "\n"


def save(doc: JetDocument, path: str | Path) -> None:
    Path(path).write_text(dumps(doc), encoding="utf-8")
