"""Time series data model and file ingestion.

Two wire formats are supported:

* CSV: one series per row, comma separated, with an optional leading
  label field.
* UCR-style TSV: one series per row, tab separated, mandatory leading
  class label, trailing empty fields trimmed (series may have
  different lengths).

Loading performs validation only; values are never transformed.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np

__all__ = [
    "TimeSeries",
    "Dataset",
    "DataFormatError",
    "load_csv",
    "load_ucr_tsv",
    "save_csv",
]


class DataFormatError(ValueError):
    """Raised when an input file cannot be parsed into a valid dataset.

    Carries the offending 0-based row and column when known.
    """

    def __init__(self, message: str, row: int | None = None, column: int | None = None):
        loc = []
        if row is not None:
            loc.append(f"row {row}")
        if column is not None:
            loc.append(f"column {column}")
        super().__init__(f"{message} ({', '.join(loc)})" if loc else message)
        self.row = row
        self.column = column


@dataclass(frozen=True)
class TimeSeries:
    """An ordered sequence of finite real observations.

    The index of each value is its time stamp, in sample units.
    """

    id: str
    values: np.ndarray
    label: str | None = None

    def __post_init__(self) -> None:
        arr = np.asarray(self.values, dtype=np.float64)
        if arr.ndim != 1:
            raise ValueError(f"series {self.id!r}: values must be one-dimensional")
        if not np.all(np.isfinite(arr)):
            bad = int(np.flatnonzero(~np.isfinite(arr))[0])
            raise ValueError(f"series {self.id!r}: non-finite value at position {bad}")
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    def __len__(self) -> int:
        return int(self.values.shape[0])


@dataclass(frozen=True)
class Dataset:
    """An ordered collection of time series with unique ids."""

    series: tuple[TimeSeries, ...]
    has_labels: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "series", tuple(self.series))
        ids = [s.id for s in self.series]
        if len(set(ids)) != len(ids):
            dup = next(i for i in ids if ids.count(i) > 1)
            raise ValueError(f"duplicate series id {dup!r}")
        if self.has_labels and any(s.label is None for s in self.series):
            missing = next(s.id for s in self.series if s.label is None)
            raise ValueError(f"dataset has labels but series {missing!r} carries none")

    def __len__(self) -> int:
        return len(self.series)

    def __iter__(self) -> Iterator[TimeSeries]:
        return iter(self.series)

    def __getitem__(self, i: int) -> TimeSeries:
        return self.series[i]

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(s.id for s in self.series)

    @property
    def labels(self) -> tuple[str, ...] | None:
        if not self.has_labels:
            return None
        return tuple(s.label for s in self.series)  # type: ignore[misc]


def _parse_value(raw: str, row: int, column: int) -> float:
    try:
        v = float(raw)
    except ValueError:
        raise DataFormatError(f"cannot parse {raw!r} as a number", row, column) from None
    if not math.isfinite(v):
        raise DataFormatError(f"non-finite value {raw!r}", row, column)
    return v


def _series_from_fields(
    fields: Sequence[str], row: int, first_value_col: int, label: str | None
) -> TimeSeries:
    if len(fields) < 2:
        raise DataFormatError(
            f"series needs at least 2 values, got {len(fields)}", row
        )
    values = [_parse_value(f, row, first_value_col + j) for j, f in enumerate(fields)]
    return TimeSeries(id=f"row{row}", values=np.array(values), label=label)


def load_csv(path: str | Path, label_column: bool = False) -> Dataset:
    """Load a comma-separated dataset, one series per row.

    With ``label_column`` the first field of each row is the class
    label; the remaining fields are the values. Row order is preserved
    and ids are assigned as ``row0``, ``row1``, ...
    """
    series = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        for row, fields in enumerate(csv.reader(fh)):
            if not fields:
                raise DataFormatError("empty row", row)
            label = None
            first_value_col = 0
            if label_column:
                label, fields = fields[0], fields[1:]
                first_value_col = 1
            series.append(_series_from_fields(fields, row, first_value_col, label))
    return Dataset(series=tuple(series), has_labels=label_column)


def load_ucr_tsv(path: str | Path) -> Dataset:
    """Load a UCR-archive-style TSV: tab separated, label in the first column.

    Trailing empty fields are trimmed, so files holding series of
    different lengths load cleanly.
    """
    series = []
    with open(path, "r", encoding="utf-8") as fh:
        for row, line in enumerate(fh):
            line = line.rstrip("\r\n")
            if not line:
                raise DataFormatError("empty row", row)
            fields = line.split("\t")
            while fields and fields[-1].strip() == "":
                fields.pop()
            if not fields:
                raise DataFormatError("row holds no fields", row)
            label, value_fields = fields[0], fields[1:]
            series.append(_series_from_fields(value_fields, row, 1, label))
    return Dataset(series=tuple(series), has_labels=True)


def save_csv(ds: Dataset, path: str | Path, include_labels: bool | None = None) -> None:
    """Write a dataset in the CSV wire format.

    Values are written with ``repr`` so that reloading reproduces them
    bit-for-bit. ``include_labels`` defaults to ``ds.has_labels``.
    """
    if include_labels is None:
        include_labels = ds.has_labels
    if include_labels and not ds.has_labels:
        raise ValueError("cannot write labels: dataset has none")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        for s in ds:
            row = [s.label] if include_labels else []
            row.extend(repr(float(v)) for v in s.values)
            writer.writerow(row)
