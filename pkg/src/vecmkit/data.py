"""Annual time-series containers, CSV ingestion and lag/difference helpers."""

from __future__ import annotations

import csv
import io
import math
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    ConfigError,
    DataError,
    GapError,
    LengthError,
    NoOverlapError,
    OrderError,
    ParseError,
)

#: Environment variable holding the default decimal separator for CSV input.
DECIMAL_ENV = "VECMKIT_DECIMAL_SEPARATOR"

_MISSING = {"", "na", "n/a", "nan", "null", "none", "-", "."}


def _frozen_array(values) -> np.ndarray:
    arr = np.array(values, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class TimeSeries:
    """One named annual series; observation ``t`` belongs to ``start_year + t``."""

    name: str
    start_year: int
    values: np.ndarray

    def __post_init__(self):
        vals = _frozen_array(self.values)
        if vals.ndim != 1 or vals.size == 0:
            raise LengthError(f"series {self.name!r} must be a non-empty 1-d sequence")
        if not np.all(np.isfinite(vals)):
            bad = int(np.flatnonzero(~np.isfinite(vals))[0])
            raise GapError(self.start_year + bad, self.name)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "start_year", int(self.start_year))

    def __len__(self) -> int:
        return self.values.size

    @property
    def end_year(self) -> int:
        return self.start_year + len(self) - 1

    @property
    def years(self) -> np.ndarray:
        return np.arange(self.start_year, self.end_year + 1)

    def window(self, first_year: int, last_year: int) -> "TimeSeries":
        if first_year < self.start_year or last_year > self.end_year or first_year > last_year:
            raise LengthError(
                f"window {first_year}-{last_year} outside {self.name!r} "
                f"({self.start_year}-{self.end_year})"
            )
        i0 = first_year - self.start_year
        return TimeSeries(self.name, first_year, self.values[i0 : i0 + last_year - first_year + 1])

    def renamed(self, name: str) -> "TimeSeries":
        return TimeSeries(name, self.start_year, self.values)

    def __eq__(self, other):
        if not isinstance(other, TimeSeries):
            return NotImplemented
        return (
            self.name == other.name
            and self.start_year == other.start_year
            and np.array_equal(self.values, other.values)
        )

    def __hash__(self):
        return hash((self.name, self.start_year, self.values.tobytes()))


@dataclass(frozen=True, eq=False)
class Dataset:
    """Ordered collection of series.

    ``sample`` is the (first_year, last_year) window shared by every member;
    it is only meaningful once the dataset is aligned (``is_aligned``).
    """

    series: tuple[TimeSeries, ...]

    def __post_init__(self):
        series = tuple(self.series)
        if not series:
            raise DataError("a dataset needs at least one series")
        names = [s.name for s in series]
        if len(set(names)) != len(names):
            raise DataError(f"duplicate series names: {names}")
        object.__setattr__(self, "series", series)

    @property
    def names(self) -> list[str]:
        return [s.name for s in self.series]

    @property
    def sample(self) -> tuple[int, int]:
        return (
            max(s.start_year for s in self.series),
            min(s.end_year for s in self.series),
        )

    @property
    def is_aligned(self) -> bool:
        first = self.series[0]
        return all(
            s.start_year == first.start_year and len(s) == len(first) for s in self.series
        )

    @property
    def nobs(self) -> int:
        first, last = self.sample
        return max(last - first + 1, 0)

    def __len__(self) -> int:
        return len(self.series)

    def __getitem__(self, name: str) -> TimeSeries:
        for s in self.series:
            if s.name == name:
                return s
        raise KeyError(name)

    def select(self, names: Sequence[str]) -> "Dataset":
        missing = [n for n in names if n not in self.names]
        if missing:
            raise ConfigError(f"variables not in dataset: {missing}")
        return Dataset(tuple(self[n] for n in names))

    def to_array(self) -> np.ndarray:
        """Aligned values as an (nobs, k) array."""
        ds = self if self.is_aligned else align(self)
        return np.column_stack([s.values for s in ds.series])

    @classmethod
    def from_array(cls, data, names: Sequence[str], start_year: int = 1) -> "Dataset":
        data = np.asarray(data, dtype=float)
        if data.ndim == 1:
            data = data[:, None]
        if data.shape[1] != len(names):
            raise DataError(f"{data.shape[1]} columns but {len(names)} names")
        return cls(tuple(TimeSeries(n, start_year, data[:, i]) for i, n in enumerate(names)))

    def __eq__(self, other):
        if not isinstance(other, Dataset):
            return NotImplemented
        return self.series == other.series

    def __hash__(self):
        return hash(self.series)


@dataclass(frozen=True)
class LoadOptions:
    delimiter: str = ","
    decimal_separator: str | None = None
    year_column: str | None = None
    value_columns: tuple[str, ...] | None = None
    log_columns: tuple[str, ...] = field(default_factory=tuple)

    def resolved_decimal(self) -> str:
        sep = self.decimal_separator or os.environ.get(DECIMAL_ENV) or "."
        if sep not in {".", ","}:
            raise ConfigError(f"unsupported decimal separator {sep!r}")
        return sep


def _parse_number(text: str, decimal: str, row: int, column: str) -> float:
    t = text.strip()
    if decimal == ",":
        if "." in t.replace("e.", "").replace("E.", ""):
            # thousands grouping is ambiguous; refuse rather than guess
            raise ParseError(row, column, text)
        t = t.replace(",", ".")
    try:
        value = float(t)
    except ValueError:
        raise ParseError(row, column, text) from None
    if not math.isfinite(value):
        raise ParseError(row, column, text)
    return value


def read_csv_text(text: str, options: LoadOptions | None = None) -> Dataset:
    """Parse CSV content already in memory; see :func:`load_csv`."""
    opts = options or LoadOptions()
    decimal = opts.resolved_decimal()
    if decimal == opts.delimiter:
        raise ConfigError("delimiter and decimal separator must differ")

    reader = csv.reader(io.StringIO(text), delimiter=opts.delimiter)
    try:
        header = [h.strip() for h in next(reader)]
    except StopIteration:
        raise DataError("empty CSV input") from None
    if len(header) < 2:
        raise DataError("CSV needs a year column and at least one value column")

    year_col = opts.year_column or header[0]
    if year_col not in header:
        raise ConfigError(f"year column {year_col!r} not in header {header}")
    value_cols = list(opts.value_columns) if opts.value_columns else [h for h in header if h != year_col]
    missing = [c for c in value_cols if c not in header]
    if missing:
        raise ConfigError(f"value columns not in header: {missing}")
    for c in opts.log_columns:
        if c not in value_cols:
            raise ConfigError(f"log column {c!r} is not a loaded value column")

    yi = header.index(year_col)
    idx = {c: header.index(c) for c in value_cols}
    years: list[int] = []
    cols: dict[str, list[float]] = {c: [] for c in value_cols}
    for rownum, row in enumerate(reader, start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) < len(header):
            row = row + [""] * (len(header) - len(row))
        ytext = row[yi].strip()
        try:
            year = int(ytext)
        except ValueError:
            try:
                fyear = float(ytext)
            except ValueError:
                raise ParseError(rownum, year_col, ytext) from None
            if not fyear.is_integer():
                raise ParseError(rownum, year_col, ytext) from None
            year = int(fyear)
        if years and year != years[-1] + 1:
            raise OrderError(f"row {rownum}: year {year} does not follow {years[-1]}")
        years.append(year)
        for c in value_cols:
            cell = row[idx[c]]
            if cell.strip().lower() in _MISSING:
                raise GapError(year, c)
            cols[c].append(_parse_number(cell, decimal, rownum, c))

    if not years:
        raise DataError("CSV has a header but no data rows")

    out = []
    for c in value_cols:
        vals = np.array(cols[c])
        if c in opts.log_columns:
            if np.any(vals <= 0):
                raise DataError(f"log transform requested for {c!r} but it has non-positive values")
            vals = np.log(vals)
        out.append(TimeSeries(c, years[0], vals))
    return Dataset(tuple(out))


def load_csv(path: str | os.PathLike, options: LoadOptions | None = None) -> Dataset:
    """Load annual data: one year column plus one column per series.

    Years must increase by exactly one per row. Empty or NA cells raise
    :class:`GapError`; nothing is interpolated.
    """
    p = Path(path)
    if not p.is_file():
        raise DataError(f"no such file: {p}")
    return read_csv_text(p.read_text(encoding="utf-8-sig"), options)


def write_csv(
    ds: Dataset,
    path: str | os.PathLike | None = None,
    *,
    delimiter: str = ",",
    decimal_separator: str = ".",
    year_column: str = "year",
) -> str:
    """Serialize an aligned dataset with round-trip exact float formatting."""
    if decimal_separator == delimiter:
        raise ConfigError("delimiter and decimal separator must differ")
    ds = ds if ds.is_aligned else align(ds)
    buf = io.StringIO()
    w = csv.writer(buf, delimiter=delimiter, lineterminator="\n")
    w.writerow([year_column, *ds.names])
    data = ds.to_array()
    for year, row in zip(ds.series[0].years, data):
        cells = [repr(float(v)) for v in row]
        if decimal_separator == ",":
            cells = [c.replace(".", ",") for c in cells]
        w.writerow([int(year), *cells])
    text = buf.getvalue()
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text


def difference(s: TimeSeries, order: int = 1) -> TimeSeries:
    if order < 1:
        raise ValueError("difference order must be positive")
    if order >= len(s):
        raise LengthError(f"cannot difference {len(s)} observations {order} times")
    return TimeSeries(s.name, s.start_year + order, np.diff(s.values, n=order))


def lag(s: TimeSeries, k: int) -> TimeSeries:
    """Shift by ``k`` periods: entry for year t is the value from year t-k."""
    if k < 1:
        raise ValueError("lag must be a positive integer")
    if k >= len(s):
        raise LengthError(f"cannot lag {len(s)} observations by {k}")
    return TimeSeries(s.name, s.start_year + k, s.values[: len(s) - k])


def align(ds: Dataset) -> Dataset:
    """Trim every series to the intersection of their year ranges."""
    first, last = ds.sample
    if first > last:
        raise NoOverlapError(f"series {ds.names} share no common year")
    return Dataset(tuple(s.window(first, last) for s in ds.series))


def lag_matrix(x: np.ndarray, lags: int) -> np.ndarray:
    """Stack lags 1..lags of a (T, k) array; rows align with x[lags:]."""
    x = np.asarray(x, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    n = x.shape[0]
    if lags == 0:
        return np.empty((n, 0))
    return np.hstack([x[lags - j : n - j] for j in range(1, lags + 1)])


def as_series(values: Iterable[float], name: str = "y", start_year: int = 1) -> TimeSeries:
    return TimeSeries(name, start_year, np.asarray(list(values) if not isinstance(values, np.ndarray) else values, dtype=float))
