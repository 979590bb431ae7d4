"""Measurement records and their conversion to Stokes vectors.

Three record kinds are supported:

* ``CountRecord``: four photon counts N_H, N_V, N_D, N_R with N = N_H + N_V.
* ``SixCountRecord``: counts in both outcomes of all three bases.
* ``IntensityRecord``: beam intensities I, I_H, I_D, I_R.

Counts are accepted as non-negative reals so that pre-corrected data can be
fed in directly. Nothing is clamped here; a 4-count or intensity record can
produce Stokes components outside [-1, 1], and that is left to the repair
stage.
"""

from __future__ import annotations

import csv
import io
import json
import math
import numbers
from dataclasses import dataclass, field
from typing import BinaryIO, Union

from .core import StokesVector
from .errors import (
    EmptyBasisError,
    EmptyEnsembleError,
    InvalidInputError,
    ParseError,
    SchemaError,
    ValidationError,
    ZeroIntensityError,
)


def _check_amount(name: str, value) -> float:
    if isinstance(value, bool) or not isinstance(value, numbers.Real):
        raise InvalidInputError(f"{name}={value!r} is not a real number")
    value = float(value)
    if not math.isfinite(value):
        raise InvalidInputError(f"{name}={value!r} is not finite")
    if value < 0:
        raise InvalidInputError(f"{name}={value!r} is negative")
    return value


class _Record:
    fields: tuple[str, ...] = ()

    def __post_init__(self):
        for name in self.fields:
            object.__setattr__(self, name, _check_amount(name, getattr(self, name)))
        self._validate()

    def _validate(self):
        pass


@dataclass(frozen=True)
class CountRecord(_Record):
    n_h: float
    n_v: float
    n_d: float
    n_r: float
    label: str | None = None
    line: int | None = field(default=None, compare=False)

    fields = ("n_h", "n_v", "n_d", "n_r")

    def _validate(self):
        if self.n_h + self.n_v <= 0:
            raise EmptyEnsembleError("n_h + n_v must be positive")

    @property
    def total(self) -> float:
        return self.n_h + self.n_v


@dataclass(frozen=True)
class SixCountRecord(_Record):
    n_d: float
    n_a: float
    n_r: float
    n_l: float
    n_h: float
    n_v: float
    label: str | None = None
    line: int | None = field(default=None, compare=False)

    fields = ("n_d", "n_a", "n_r", "n_l", "n_h", "n_v")

    def _validate(self):
        for basis, a, b in (("D/A", self.n_d, self.n_a), ("R/L", self.n_r, self.n_l), ("H/V", self.n_h, self.n_v)):
            if a + b <= 0:
                raise EmptyBasisError(basis)


@dataclass(frozen=True)
class IntensityRecord(_Record):
    i_total: float
    i_h: float
    i_d: float
    i_r: float
    label: str | None = None
    line: int | None = field(default=None, compare=False)

    fields = ("i_total", "i_h", "i_d", "i_r")

    def _validate(self):
        if self.i_total <= 0:
            raise ZeroIntensityError("i_total must be positive")


Record = Union[CountRecord, SixCountRecord, IntensityRecord]

SCHEMAS: dict[frozenset[str], type] = {
    frozenset(CountRecord.fields): CountRecord,
    frozenset(SixCountRecord.fields): SixCountRecord,
    frozenset(IntensityRecord.fields): IntensityRecord,
}


def stokes_from_counts(rec: CountRecord) -> StokesVector:
    """Stokes vector from four counts: s_x = 2 n_x / N - 1."""
    n = rec.n_h + rec.n_v
    if n <= 0:
        raise EmptyEnsembleError("n_h + n_v must be positive")
    return StokesVector(2.0 * rec.n_d / n - 1.0, 2.0 * rec.n_r / n - 1.0, 2.0 * rec.n_h / n - 1.0)


def stokes_from_six_counts(rec: SixCountRecord) -> StokesVector:
    """Per-basis contrast (n_plus - n_minus) / (n_plus + n_minus)."""
    out = []
    for basis, a, b in (("D/A", rec.n_d, rec.n_a), ("R/L", rec.n_r, rec.n_l), ("H/V", rec.n_h, rec.n_v)):
        if a + b <= 0:
            raise EmptyBasisError(basis)
        out.append((a - b) / (a + b))
    return StokesVector(*out)


def stokes_from_intensities(rec: IntensityRecord) -> StokesVector:
    if rec.i_total <= 0:
        raise ZeroIntensityError("i_total must be positive")
    i = rec.i_total
    return StokesVector(2.0 * rec.i_d / i - 1.0, 2.0 * rec.i_r / i - 1.0, 2.0 * rec.i_h / i - 1.0)


def stokes_from_record(rec: Record) -> StokesVector:
    """Dispatch to the pathway matching the record kind."""
    if isinstance(rec, CountRecord):
        return stokes_from_counts(rec)
    if isinstance(rec, SixCountRecord):
        return stokes_from_six_counts(rec)
    if isinstance(rec, IntensityRecord):
        return stokes_from_intensities(rec)
    raise TypeError(f"unsupported record type {type(rec).__name__}")


def _schema_for(names, **where) -> type:
    names = set(names)
    names.discard("label")
    try:
        return SCHEMAS[frozenset(names)]
    except KeyError:
        raise SchemaError(
            f"field set {sorted(names)} matches no record schema "
            "(expected n_h,n_v,n_d,n_r | n_d,n_a,n_r,n_l,n_h,n_v | i_total,i_h,i_d,i_r)",
            **where,
        ) from None


def _build(cls, values: dict, label, **where) -> Record:
    try:
        return cls(**values, label=label, line=where.get("line", where.get("index")))
    except InvalidInputError as exc:
        raise ValidationError(str(exc), **where) from exc


def _parse_csv(text: str) -> list[Record]:
    reader = csv.reader(io.StringIO(text, newline=""))
    header = None
    records = []
    for row in reader:
        line = reader.line_num
        if not row or all(not cell.strip() for cell in row):
            continue
        if header is None:
            header = [h.strip() for h in row]
            if len(set(header)) != len(header):
                raise SchemaError(f"duplicate column in header {header}", line=line)
            cls = _schema_for(header, line=line)
            continue
        if len(row) != len(header):
            raise ParseError(f"expected {len(header)} fields, found {len(row)}", line=line)
        values = {}
        label = None
        for name, cell in zip(header, row):
            cell = cell.strip()
            if name == "label":
                label = cell
                continue
            try:
                values[name] = float(cell)
            except ValueError:
                raise ParseError(f"field {name}={cell!r} is not a number", line=line) from None
        records.append(_build(cls, values, label, line=line))
    if header is None:
        raise ParseError("empty CSV input: no header row")
    return records


def _parse_json(text: str) -> list[Record]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", line=exc.lineno) from None
    items = [doc] if isinstance(doc, dict) else doc
    if not isinstance(items, list):
        raise ParseError("JSON input must be an object or an array of objects")
    records = []
    for index, item in enumerate(items):
        if not isinstance(item, dict):
            raise ParseError("record is not a JSON object", index=index)
        cls = _schema_for(item.keys(), index=index)
        label = item.get("label")
        if label is not None and not isinstance(label, str):
            raise ParseError("label must be a string", index=index)
        values = {k: v for k, v in item.items() if k != "label"}
        for name, v in values.items():
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise ParseError(f"field {name}={v!r} is not a number", index=index)
        records.append(_build(cls, values, label, index=index))
    return records


def sniff_format(data: bytes) -> str:
    """'json' if the first non-blank character opens an object or array, else 'csv'."""
    head = data.lstrip(b"\xef\xbb\xbf \t\r\n")[:1]
    return "json" if head in (b"{", b"[") else "csv"


def parse_records(source: bytes | str | BinaryIO, format: str = "auto") -> list[Record]:
    """Parse CSV or JSON measurement data into records, in file order.

    Args:
        source: raw bytes, already-decoded text, or a binary stream.
        format: ``"csv"``, ``"json"`` or ``"auto"`` (sniffed from content).

    Raises:
        ParseError: undecodable input or malformed row/document.
        SchemaError: header or key set matches no record kind.
        ValidationError: a record breaks its invariants (negative count, ...).
    """
    if hasattr(source, "read"):
        source = source.read()
    if isinstance(source, str):
        source = source.encode("utf-8")
    if format == "auto":
        format = sniff_format(source)
    try:
        text = source.decode("utf-8-sig")
    except UnicodeDecodeError as exc:
        raise ParseError(f"input is not valid UTF-8 ({exc.reason})") from None
    if format == "csv":
        return _parse_csv(text)
    if format == "json":
        return _parse_json(text)
    raise ValueError(f"unknown format {format!r}")
