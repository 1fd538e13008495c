"""Binning of numeric columns into labeled categorical columns.

Bin labels are "b0".."b{n_bins-1}" in edge order, so discretization is
order preserving. Values on an interior edge fall to the lower bin; values
at or beyond the outer edges clip to the first/last bin, so application
never produces a label outside the fitted support.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .schema import CAT, NUM, Column, Dataset, from_arrays


@dataclass(frozen=True)
class Discretizer:
    # column name -> strictly increasing edge array of length n_bins + 1
    edges: dict[str, np.ndarray]
    n_bins: int
    strategy: str

    def labels(self) -> tuple[str, ...]:
        return tuple(f"b{i}" for i in range(self.n_bins))


def fit_discretizer(ds: Dataset, strategy: str = "uniform", n_bins: int = 10) -> Discretizer:
    if strategy not in ("uniform", "quantile"):
        raise ValueError(f"unknown strategy {strategy!r}")
    if n_bins < 2:
        raise ValueError("n_bins must be at least 2")
    edges = {}
    for col, arr in zip(ds.schema, ds.cols):
        if col.kind != NUM:
            continue
        if arr.size == 0:
            raise ValueError(f"column {col.name!r}: cannot fit on empty data")
        if strategy == "uniform":
            lo, hi = float(arr.min()), float(arr.max())
            if lo == hi:
                raise ValueError(f"column {col.name!r}: constant column")
            e = np.linspace(lo, hi, n_bins + 1)
        else:
            e = np.quantile(arr, np.linspace(0.0, 1.0, n_bins + 1))
            if not np.all(np.diff(e) > 0):
                raise ValueError(
                    f"column {col.name!r}: quantile edges are not distinct"
                )
        edges[col.name] = e
    if not edges:
        raise ValueError("dataset has no numeric columns to discretize")
    return Discretizer(edges, n_bins, strategy)


def bin_of(disc: Discretizer, name: str, values: np.ndarray) -> np.ndarray:
    """Bin index per value; interior edges go to the lower bin, out-of-range clips."""
    e = disc.edges[name]
    return np.searchsorted(e[1:-1], values, side="left").astype(np.int32)


def apply_discretizer(disc: Discretizer, ds: Dataset) -> Dataset:
    labels = disc.labels()
    schema, cols = [], []
    for col, arr in zip(ds.schema, ds.cols):
        if col.kind == NUM:
            if col.name not in disc.edges:
                raise ValueError(f"column {col.name!r}: discretizer was not fitted on it")
            schema.append(Column(col.name, CAT, labels))
            cols.append(bin_of(disc, col.name, arr))
        else:
            schema.append(col)
            cols.append(arr)
    return from_arrays(schema, cols, provenance=ds.provenance)
