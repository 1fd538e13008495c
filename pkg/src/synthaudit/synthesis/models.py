"""Generator models behind a single sample() interface.

Every model exposes ``schema`` and ``sample(n, seed) -> Dataset``. Fitting
goes through ``fit(kind, train, dp, seed)``; anything else that implements
the same two attributes (external samplers, adapters) plugs in wherever a
model is accepted.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .. import seeds
from ..tabular.schema import CAT, NUM, Dataset, from_arrays
from .dp import DpBudget

KINDS = ("oracle", "random", "independent", "privbayes_lite")


@dataclass(frozen=True)
class OracleModel:
    """Closed-form standard normal; fitting records the schema only."""
    schema: tuple

    def sample(self, n: int, seed: int) -> Dataset:
        r = seeds.rng(seed, "oracle-sample", n)
        pts = r.standard_normal((n, len(self.schema)))
        return from_arrays(self.schema, [pts[:, i] for i in range(pts.shape[1])],
                           provenance="oracle")


@dataclass(frozen=True)
class RandomModel:
    """Uniform over the per-column values observed in train."""
    schema: tuple
    observed: tuple[np.ndarray, ...]   # distinct codes/values per column

    def sample(self, n: int, seed: int) -> Dataset:
        r = seeds.rng(seed, "random-sample", n)
        cols = []
        for col, vals in zip(self.schema, self.observed):
            draw = vals[r.integers(0, len(vals), size=n)]
            cols.append(draw)
        return from_arrays(self.schema, cols, provenance="random")


@dataclass(frozen=True)
class IndependentModel:
    """Per-column categorical marginals, optionally Laplace-noised."""
    schema: tuple
    probs: tuple[np.ndarray, ...]
    dp: DpBudget | None

    def sample(self, n: int, seed: int) -> Dataset:
        r = seeds.rng(seed, "independent-sample", n)
        cols = []
        for col, p in zip(self.schema, self.probs):
            cols.append(r.choice(len(p), size=n, p=p).astype(np.int32))
        return from_arrays(self.schema, cols, provenance="independent")


def _noisy_probs(counts: np.ndarray, scale: float, r) -> np.ndarray:
    noisy = counts.astype(np.float64)
    if scale > 0.0:
        noisy = noisy + r.laplace(0.0, scale, size=noisy.shape)
    noisy = np.maximum(noisy, 0.0)
    total = noisy.sum()
    if total <= 0.0:
        return np.full(noisy.shape, 1.0 / noisy.shape[0])
    return noisy / total


def fit_independent(train: Dataset, dp: DpBudget | None, seed: int) -> IndependentModel:
    for col in train.schema:
        if col.kind != CAT:
            raise ValueError("independent model needs categorical columns")
    dp = dp.resolved(train.n_rows) if dp is not None else None
    # eps split evenly across columns; count sensitivity 1
    scale = (len(train.schema) / dp.eps) if dp is not None and dp.finite else 0.0
    r = seeds.rng(seed, "independent-fit")
    probs = []
    for col, arr in zip(train.schema, train.cols):
        counts = np.bincount(arr, minlength=len(col.support))
        probs.append(_noisy_probs(counts, scale, r))
    return IndependentModel(train.schema, tuple(probs), dp)


def fit_random(train: Dataset) -> RandomModel:
    observed = []
    for col, arr in zip(train.schema, train.cols):
        vals = np.unique(arr)
        if vals.size == 0:
            raise ValueError("cannot fit on empty data")
        observed.append(vals)
    return RandomModel(train.schema, tuple(observed))


def fit(kind: str, train: Dataset, dp: DpBudget | None = None, seed: int = 0):
    from .privbayes import fit_privbayes

    if kind == "oracle":
        for col in train.schema:
            if col.kind != NUM:
                raise ValueError("oracle model needs numeric columns")
        return OracleModel(train.schema)
    if kind == "random":
        return fit_random(train)
    if kind == "independent":
        return fit_independent(train, dp, seed)
    if kind == "privbayes_lite":
        return fit_privbayes(train, dp, seed)
    raise ValueError(f"unknown model kind {kind!r}")
