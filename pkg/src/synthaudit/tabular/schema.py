"""Column schema and the immutable dataset container.

A column is either categorical (an ordered support of string labels) or
numeric (a declared [lo, hi] range). Data is stored column-major: int32
codes into the support for categorical columns, float64 for numeric ones.
Row views are materialized on demand; all arrays are frozen at
construction so datasets can be shared safely.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

CAT = "cat"
NUM = "num"

# Numeric values are keyed after rounding to this many decimal digits so
# exact-match logic behaves identically across serialization boundaries.
CANON_DIGITS = 12


class SchemaError(ValueError):
    """A record does not fit the schema it was submitted against."""


@dataclass(frozen=True)
class Column:
    name: str
    kind: str
    support: tuple[str, ...] = ()
    lo: float = -1e9
    hi: float = 1e9

    def __post_init__(self):
        if self.kind not in (CAT, NUM):
            raise SchemaError(f"column {self.name!r}: unknown kind {self.kind!r}")
        if self.kind == CAT:
            if len(set(self.support)) != len(self.support):
                raise SchemaError(f"column {self.name!r}: duplicate support labels")
        elif not self.lo < self.hi:
            raise SchemaError(f"column {self.name!r}: requires lo < hi")


def cat_column(name: str, support) -> Column:
    return Column(name, CAT, tuple(str(s) for s in support))


def num_column(name: str, lo: float = -1e9, hi: float = 1e9) -> Column:
    return Column(name, NUM, (), float(lo), float(hi))


def canon_value(col: Column, v):
    if col.kind == NUM:
        return round(float(v), CANON_DIGITS)
    return v


@dataclass(frozen=True, eq=False)
class Dataset:
    schema: tuple[Column, ...]
    cols: tuple[np.ndarray, ...]
    provenance: str = ""
    _index: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if len(self.schema) != len(self.cols):
            raise SchemaError("schema and column arrays disagree in width")
        n = self.cols[0].shape[0] if self.cols else 0
        for col, arr in zip(self.schema, self.cols):
            if arr.shape != (n,):
                raise SchemaError(f"column {col.name!r}: ragged column array")
            arr.flags.writeable = False

    @property
    def n_rows(self) -> int:
        return self.cols[0].shape[0] if self.cols else 0

    @property
    def n_cols(self) -> int:
        return len(self.schema)

    def record(self, i: int) -> tuple:
        out = []
        for col, arr in zip(self.schema, self.cols):
            if col.kind == CAT:
                out.append(col.support[arr[i]])
            else:
                out.append(float(arr[i]))
        return tuple(out)

    def records(self) -> list[tuple]:
        return [self.record(i) for i in range(self.n_rows)]

    def canon_record(self, i: int) -> tuple:
        return tuple(
            canon_value(col, v) for col, v in zip(self.schema, self.record(i))
        )

    def select(self, indices) -> "Dataset":
        idx = np.asarray(indices, dtype=np.int64)
        return Dataset(
            self.schema,
            tuple(arr[idx].copy() for arr in self.cols),
            provenance=self.provenance,
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, Dataset):
            return NotImplemented
        return self.schema == other.schema and all(
            np.array_equal(a, b) for a, b in zip(self.cols, other.cols)
        )

    def __len__(self) -> int:
        return self.n_rows


def _encode_column(col: Column, values, codes_out, row_offset=0):
    if col.kind == CAT:
        lookup = {label: i for i, label in enumerate(col.support)}
        for i, v in enumerate(values):
            code = lookup.get(v)
            if code is None:
                raise SchemaError(
                    f"row {row_offset + i}, column {col.name!r}: "
                    f"value {v!r} not in support"
                )
            codes_out[i] = code
    else:
        for i, v in enumerate(values):
            if isinstance(v, bool) or not isinstance(v, (int, float, np.floating, np.integer)):
                raise SchemaError(
                    f"row {row_offset + i}, column {col.name!r}: "
                    f"value {v!r} is not numeric"
                )
            f = float(v)
            if not (col.lo <= f <= col.hi):
                raise SchemaError(
                    f"row {row_offset + i}, column {col.name!r}: "
                    f"value {f} outside [{col.lo}, {col.hi}]"
                )
            codes_out[i] = f


def from_records(schema, records, provenance: str = "") -> Dataset:
    """Build a dataset from row tuples, validating against the schema."""
    schema = tuple(schema)
    records = list(records)
    n = len(records)
    for i, r in enumerate(records):
        if len(r) != len(schema):
            raise SchemaError(
                f"row {i}: has {len(r)} values, schema has {len(schema)}"
            )
    cols = []
    for c, col in enumerate(schema):
        values = [r[c] for r in records]
        arr = np.empty(n, dtype=np.int32 if col.kind == CAT else np.float64)
        _encode_column(col, values, arr)
        cols.append(arr)
    return Dataset(schema, tuple(cols), provenance=provenance)


def from_arrays(schema, arrays, provenance: str = "") -> Dataset:
    """Build a dataset from pre-encoded column arrays (codes / floats)."""
    schema = tuple(schema)
    cols = []
    for col, arr in zip(schema, arrays):
        if col.kind == CAT:
            a = np.ascontiguousarray(arr, dtype=np.int32)
            if a.size and (a.min() < 0 or a.max() >= len(col.support)):
                raise SchemaError(f"column {col.name!r}: code out of range")
        else:
            a = np.ascontiguousarray(arr, dtype=np.float64)
        cols.append(a)
    return Dataset(schema, tuple(cols), provenance=provenance)


def concat(a: Dataset, b: Dataset) -> Dataset:
    if a.schema != b.schema:
        raise SchemaError("cannot concatenate datasets with different schemas")
    return Dataset(
        a.schema,
        tuple(np.concatenate([x, y]) for x, y in zip(a.cols, b.cols)),
        provenance=a.provenance,
    )
