"""Numeric containers, standardization, and CSV ingestion.

A ``Dataset`` couples the design matrix with its response and the
centering/scaling metadata needed to map fitted coefficients back to the
raw scale. Instances are immutable; every transformation returns a new
object.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .errors import (
    ConstantColumn,
    DimensionMismatch,
    EmptyData,
    MissingColumn,
    NonFiniteValue,
    ParseError,
)

__all__ = [
    "Dataset",
    "Coefficients",
    "standardize",
    "read_csv",
    "to_raw_scale",
]


@dataclass(frozen=True)
class Dataset:
    """Design matrix ``x`` (n rows, p columns), response ``y``, and scaling
    metadata. ``standardized`` is set by :func:`standardize`; constructing
    an instance by hand asserts only shape and positivity invariants.
    """

    x: np.ndarray
    y: np.ndarray
    column_means: np.ndarray
    column_scales: np.ndarray
    y_mean: float
    y_scale: float
    standardized: bool

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        y = np.asarray(self.y, dtype=float)
        if x.ndim != 2 or x.shape[0] < 1 or x.shape[1] < 1:
            raise EmptyData("x must be a nonempty 2-d matrix")
        if y.ndim != 1 or y.shape[0] != x.shape[0]:
            raise DimensionMismatch(
                f"y has length {y.shape[0]}, expected {x.shape[0]}"
            )
        if np.any(np.asarray(self.column_scales) <= 0):
            raise EmptyData("column_scales must be strictly positive")
        if self.y_scale <= 0:
            raise EmptyData("y_scale must be strictly positive")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "column_means", np.asarray(self.column_means, dtype=float))
        object.__setattr__(self, "column_scales", np.asarray(self.column_scales, dtype=float))
        self.x.setflags(write=False)
        self.y.setflags(write=False)

    @property
    def n(self) -> int:
        return self.x.shape[0]

    @property
    def p(self) -> int:
        return self.x.shape[1]

    @classmethod
    def from_arrays(cls, x, y) -> "Dataset":
        """Wrap raw (unstandardized) arrays with identity scaling metadata."""
        x = np.asarray(x, dtype=float)
        return cls(
            x=x,
            y=np.asarray(y, dtype=float),
            column_means=np.zeros(x.shape[1]),
            column_scales=np.ones(x.shape[1]),
            y_mean=0.0,
            y_scale=1.0,
            standardized=False,
        )


@dataclass(frozen=True)
class Coefficients:
    """Estimated coefficient vector. ``support`` is the exact-nonzero index
    set; the proximal solver produces exact zeros, so no thresholding is
    applied here.
    """

    beta: np.ndarray
    intercept: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "beta", np.asarray(self.beta, dtype=float))
        self.beta.setflags(write=False)

    @property
    def support(self) -> np.ndarray:
        return np.flatnonzero(self.beta)

    @property
    def support_size(self) -> int:
        return int(np.count_nonzero(self.beta))


def _sample_sd(a: np.ndarray, axis=0) -> np.ndarray:
    # 1/(n-1) denominator throughout, so test oracles can recompute exactly
    return np.std(a, axis=axis, ddof=1)


def standardize(raw: Dataset, scale_y: bool = True) -> Dataset:
    """Center and scale every predictor column to sample mean 0 and sample
    standard deviation 1; center ``y`` and (by default) scale it by its
    sample standard deviation.

    Raises ``EmptyData`` for fewer than two rows and ``ConstantColumn(j)``
    when column ``j`` has zero sample variance. Idempotent: standardizing
    already-standardized data is a no-op up to floating-point roundoff.
    """
    if raw.n < 2:
        raise EmptyData("standardization needs at least 2 rows")
    means = raw.x.mean(axis=0)
    scales = _sample_sd(raw.x)
    zero = np.flatnonzero(scales == 0)
    if zero.size:
        raise ConstantColumn(int(zero[0]))
    x_std = (raw.x - means) / scales
    y_mean = float(raw.y.mean())
    y_scale = float(_sample_sd(raw.y)) if scale_y else 1.0
    if y_scale == 0:
        raise ConstantColumn("y")
    y_std = (raw.y - y_mean) / y_scale

    # compose with any scaling already recorded on the input, so that the
    # stored metadata always maps back to the original raw data
    return Dataset(
        x=x_std,
        y=y_std,
        column_means=raw.column_means + means * raw.column_scales,
        column_scales=raw.column_scales * scales,
        y_mean=raw.y_mean + y_mean * raw.y_scale,
        y_scale=raw.y_scale * y_scale,
        standardized=True,
    )


def to_raw_scale(coef: Coefficients, data: Dataset) -> Coefficients:
    """Map coefficients fitted on standardized data back to the raw scale.

    raw prediction = y_mean + y_scale * (x_std @ beta_std + intercept_std)
    """
    beta_raw = coef.beta * data.y_scale / data.column_scales
    intercept_raw = (
        data.y_mean
        + data.y_scale * coef.intercept
        - float(beta_raw @ data.column_means)
    )
    return Coefficients(beta=beta_raw, intercept=intercept_raw)


def _parse_cell(token: str, row: int, col: int) -> float:
    try:
        value = float(token)
    except ValueError as exc:
        raise ParseError(row, col, str(exc)) from exc
    if not np.isfinite(value):
        raise NonFiniteValue(row, col)
    return value


def read_csv(path, response_column) -> Dataset:
    """Read a comma-delimited UTF-8 file into an unstandardized Dataset.

    A single header row is auto-detected (first row with any non-numeric
    cell). ``response_column`` selects the response by header name or by
    integer position; the remaining columns become predictors in file
    order. Every cell must parse as a finite real.
    """
    with open(path, "r", encoding="utf-8", newline="") as fh:
        rows = [row for row in csv.reader(fh) if row]
    if not rows:
        raise EmptyData(f"{path}: empty file")

    header = None
    first = rows[0]
    if any(not _is_number(tok) for tok in first):
        header = [tok.strip() for tok in first]
        rows = rows[1:]
        if not rows:
            raise EmptyData(f"{path}: header but no data rows")

    ncol = len(rows[0])
    if isinstance(response_column, str):
        if header is None or response_column not in header:
            raise MissingColumn(response_column)
        resp_idx = header.index(response_column)
    else:
        resp_idx = int(response_column)
        if resp_idx < 0:
            resp_idx += ncol
        if not 0 <= resp_idx < ncol:
            raise MissingColumn(response_column)

    values = np.empty((len(rows), ncol))
    for i, row in enumerate(rows):
        if len(row) != ncol:
            raise ParseError(i, len(row), "inconsistent number of cells")
        for j, tok in enumerate(row):
            values[i, j] = _parse_cell(tok.strip(), i, j)

    mask = np.ones(ncol, dtype=bool)
    mask[resp_idx] = False
    if not mask.any():
        raise EmptyData("file has no predictor columns")
    return Dataset.from_arrays(values[:, mask], values[:, resp_idx])


def _is_number(token: str) -> bool:
    try:
        float(token)
        return True
    except ValueError:
        return False
