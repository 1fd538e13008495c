"""Public nearest-neighbor distances over datasets.

Hamming counts per-column disagreement and works on any schema (numeric
cells compare equal after canonical rounding). Euclidean requires an
all-numeric schema.
"""
from __future__ import annotations

import numpy as np

from ..tabular.schema import CAT, NUM, CANON_DIGITS, Dataset
from . import kernels

HAMMING = "hamming"
EUCLIDEAN = "euclidean"
METRICS = (HAMMING, EUCLIDEAN)


def _canon_floats(arr: np.ndarray) -> np.ndarray:
    # +0.0 maps -0.0 onto 0.0 so the bit patterns of equal values agree
    return np.round(arr, CANON_DIGITS) + 0.0


def hamming_codes(ds: Dataset) -> np.ndarray:
    """Rows as an int64 matrix where cell equality == value equality."""
    cols = []
    for col, arr in zip(ds.schema, ds.cols):
        if col.kind == CAT:
            cols.append(arr.astype(np.int64))
        else:
            cols.append(_canon_floats(arr).view(np.int64))
    return np.stack(cols, axis=1) if cols else np.empty((ds.n_rows, 0), np.int64)


def euclid_points(ds: Dataset) -> np.ndarray:
    for col in ds.schema:
        if col.kind != NUM:
            raise ValueError(
                f"euclidean metric needs numeric columns, {col.name!r} is categorical"
            )
    return np.stack([np.asarray(a, dtype=np.float64) for a in ds.cols], axis=1)


def row_keys(ds: Dataset) -> list[bytes]:
    """Canonical per-row byte keys; two rows get the same key iff they are
    an exact match under the canonical value comparison."""
    return [bytes(r) for r in hamming_codes(ds)]


def nn_distances(query: Dataset, reference: Dataset, metric: str):
    """Per query row: (d1, index of nearest reference row, d2).

    The reference needs at least two rows so d2 exists.
    """
    if metric not in METRICS:
        raise ValueError(f"unknown metric {metric!r}")
    if query.schema != reference.schema:
        raise ValueError("query and reference schemas differ")
    if reference.n_rows < 2:
        raise ValueError("reference needs at least 2 rows")
    if query.n_rows == 0:
        raise ValueError("query is empty")
    if metric == HAMMING:
        return kernels.nn_two_hamming(hamming_codes(query), hamming_codes(reference))
    return kernels.nn_two_euclid(euclid_points(query), euclid_points(reference))


def loo_nn_distances(ds: Dataset, metric: str) -> np.ndarray:
    """Leave-self-out nearest-neighbor distance within one dataset."""
    d1, idx, d2 = nn_distances(ds, ds, metric)
    own = idx == np.arange(ds.n_rows)
    return np.where(own, d2, d1)
