"""CSV round trip with a typed header.

Header cells are ``name:kind`` with kind in {cat, num}. Numeric cells are
written with shortest round-trip repr so write -> read reproduces the exact
float. The reader infers categorical support (sorted distinct values) and
numeric ranges from the data, since the file format carries neither.
"""
from __future__ import annotations

import csv

from .schema import CAT, NUM, Column, Dataset, from_records


class CsvFormatError(ValueError):
    def __init__(self, message: str, line: int, column: str = ""):
        at = f"line {line}" + (f", column {column!r}" if column else "")
        super().__init__(f"{message} ({at})")
        self.line = line
        self.column = column


def write_csv(ds: Dataset, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(f"{c.name}:{c.kind}" for c in ds.schema)
        for i in range(ds.n_rows):
            w.writerow(
                v if isinstance(v, str) else repr(v) for v in ds.record(i)
            )


def read_csv(path) -> Dataset:
    with open(path, "r", newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise CsvFormatError("empty file, expected a header row", 1)
        names, kinds = [], []
        for cell in header:
            name, sep, kind = cell.rpartition(":")
            if not sep or kind not in (CAT, NUM):
                raise CsvFormatError(
                    f"header cell {cell!r} is not name:cat or name:num",
                    1, cell,
                )
            names.append(name)
            kinds.append(kind)
        rows = []
        for line_no, cells in enumerate(reader, start=2):
            if len(cells) != len(names):
                raise CsvFormatError(
                    f"expected {len(names)} cells, got {len(cells)}", line_no
                )
            row = []
            for name, kind, cell in zip(names, kinds, cells):
                if kind == NUM:
                    try:
                        row.append(float(cell))
                    except ValueError:
                        raise CsvFormatError(
                            f"cell {cell!r} is not a number", line_no, name
                        )
                else:
                    row.append(cell)
            rows.append(tuple(row))

    schema = []
    for c, (name, kind) in enumerate(zip(names, kinds)):
        if kind == CAT:
            support = sorted({r[c] for r in rows})
            schema.append(Column(name, CAT, tuple(support)))
        else:
            values = [r[c] for r in rows]
            lo = min(values) if values else -1e9
            hi = max(values) if values else 1e9
            if lo == hi:
                lo, hi = lo - 1.0, hi + 1.0
            schema.append(Column(name, NUM, (), lo, hi))
    return from_records(schema, rows, provenance=str(path))
