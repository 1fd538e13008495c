"""Adapters that put external sample sources behind the model interface."""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from ..tabular.discretize import Discretizer, apply_discretizer
from ..tabular.io import read_csv
from ..tabular.schema import Dataset


class FileSampler:
    """Replays CSV files from a directory as sample() outputs, round-robin.

    Each call consumes the next file (sorted by name, wrapping around) and
    returns its rows, trimmed to n when the file holds more.
    """

    def __init__(self, directory):
        self.paths = sorted(Path(directory).glob("*.csv"))
        if not self.paths:
            raise ValueError(f"no .csv files in {directory}")
        self._cursor = 0
        self.schema = read_csv(self.paths[0]).schema

    def sample(self, n: int, seed: int = 0) -> Dataset:
        ds = read_csv(self.paths[self._cursor % len(self.paths)])
        self._cursor += 1
        # supports are inferred per file, so compare names and kinds only
        if [(c.name, c.kind) for c in ds.schema] != \
                [(c.name, c.kind) for c in self.schema]:
            raise ValueError(f"{ds.provenance}: columns differ from first file")
        if ds.n_rows > n:
            return ds.select(range(n))
        return ds


class DiscretizedSampler:
    """A continuous model observed through a fitted discretizer."""

    def __init__(self, base, disc: Discretizer):
        self.base = base
        self.disc = disc
        self.schema = apply_discretizer(disc, base.sample(1, 0)).schema

    def sample(self, n: int, seed: int) -> Dataset:
        return apply_discretizer(self.disc, self.base.sample(n, seed))
