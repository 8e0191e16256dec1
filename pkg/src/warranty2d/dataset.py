"""Bivariate failure data: container type and CSV loading.

A dataset is a list of (age, usage) failure records. Both coordinates must
be strictly positive: the lifetime model has Weibull marginals whose density
may be singular at zero, and a recorded failure at exactly zero age or zero
usage is treated as a data entry problem rather than silently accepted.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import DataError

#: Accepted column names, canonical name first.
_AGE_ALIASES = ("age",)
_USAGE_ALIASES = ("usage", "mileage")

BUNDLED_DATASET = "traction_motors"


@dataclass(frozen=True)
class Dataset:
    """Positive bivariate failure sample.

    Attributes
    ----------
    age : np.ndarray
        Failure ages, strictly positive, shape (n,).
    usage : np.ndarray
        Accumulated usage at failure, strictly positive, shape (n,).
    source : str
        Where the records came from (file path or a synthetic tag).
    """

    age: np.ndarray
    usage: np.ndarray
    source: str = "memory"

    def __post_init__(self) -> None:
        age = np.asarray(self.age, dtype=float)
        usage = np.asarray(self.usage, dtype=float)
        if age.ndim != 1 or usage.ndim != 1:
            raise DataError("age and usage must be one-dimensional")
        if age.size != usage.size:
            raise DataError(
                f"age has {age.size} records but usage has {usage.size}"
            )
        if age.size == 0:
            raise DataError("dataset is empty")
        for name, col in (("age", age), ("usage", usage)):
            if not np.all(np.isfinite(col)):
                row = int(np.flatnonzero(~np.isfinite(col))[0])
                raise DataError(f"non-finite {name} in row {row + 1}")
            if np.any(col <= 0.0):
                row = int(np.flatnonzero(col <= 0.0)[0])
                raise DataError(
                    f"{name} must be strictly positive; row {row + 1} "
                    f"has {name}={col[row]:g}"
                )
        age.setflags(write=False)
        usage.setflags(write=False)
        object.__setattr__(self, "age", age)
        object.__setattr__(self, "usage", usage)

    def __len__(self) -> int:
        return int(self.age.size)


def _resolve_column(header: list[str], aliases: tuple[str, ...]) -> int:
    for alias in aliases:
        if alias in header:
            return header.index(alias)
    raise DataError(
        f"missing column {aliases[0]!r} (accepted names: {', '.join(aliases)}); "
        f"found columns: {', '.join(header) or '(none)'}"
    )


def load_dataset(path: str | Path | None = None) -> Dataset:
    """Read a dataset from CSV.

    The file must have a header naming an ``age`` column and a ``usage``
    column (``mileage`` is accepted as an alias). Extra columns are ignored.
    With ``path=None`` the bundled traction motor failure sample (40 records)
    is loaded.

    Raises
    ------
    DataError
        If the file is missing required columns or any cell fails to parse
        or violates positivity; messages carry the offending row and column.
    """
    if path is None:
        ref = resources.files("warranty2d") / "data" / f"{BUNDLED_DATASET}.csv"
        with resources.as_file(ref) as p:
            return _read_csv(p, source=f"bundled:{BUNDLED_DATASET}")
    return _read_csv(Path(path), source=str(path))


def _read_csv(path: Path, source: str) -> Dataset:
    try:
        fh = open(path, newline="")
    except OSError as exc:
        raise DataError(f"cannot open {path}: {exc.strerror}") from exc
    with fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip().lower() for h in next(reader)]
        except StopIteration:
            raise DataError(f"{source}: file is empty") from None
        i_age = _resolve_column(header, _AGE_ALIASES)
        i_usage = _resolve_column(header, _USAGE_ALIASES)
        ages: list[float] = []
        usages: list[float] = []
        for row_no, row in enumerate(reader, start=2):
            if not row or all(not cell.strip() for cell in row):
                continue
            for idx, name, out in (
                (i_age, "age", ages),
                (i_usage, "usage", usages),
            ):
                if idx >= len(row):
                    raise DataError(f"{source}: row {row_no} is missing {name!r}")
                cell = row[idx].strip()
                try:
                    out.append(float(cell))
                except ValueError:
                    raise DataError(
                        f"{source}: row {row_no}, column {name!r}: "
                        f"cannot parse {cell!r} as a number"
                    ) from None
    try:
        return Dataset(np.array(ages), np.array(usages), source=source)
    except DataError as exc:
        raise DataError(f"{source}: {exc}") from None
