"""Ground-truth outlier labeling rules.

Three rules: a norm radius on numeric data, membership in the smallest
GMM clusters, and a designated category of one column. All return sorted
row indices into the dataset they were applied to.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .. import mixture
from .schema import CAT, NUM, Dataset


@dataclass(frozen=True)
class Radius:
    r: float


@dataclass(frozen=True)
class GmmSmallest:
    k: int = 10
    budget: int | None = None     # None: 10% of the dataset
    seed: int = 0
    encoding: str = "onehot"
    # Wide floor so duplicated cells cannot spawn degenerate components;
    # restarts pick the best of several EM runs by final likelihood.
    floor: float = 0.1
    restarts: int = 20


@dataclass(frozen=True)
class DesignatedClass:
    column: str
    label: str


# chi-square 90% quantile radii: ~10% of standard-normal mass lies beyond
RADIUS_BY_DIM = {2: 2.15, 3: 2.50, 4: 2.79, 5: 3.04}


def label_outliers(ds: Dataset, rule) -> np.ndarray:
    if isinstance(rule, Radius):
        num = [arr for col, arr in zip(ds.schema, ds.cols) if col.kind == NUM]
        if not num:
            raise ValueError("radius rule needs numeric columns")
        norms = np.sqrt(np.sum(np.stack(num) ** 2, axis=0))
        return np.flatnonzero(norms > rule.r)
    if isinstance(rule, GmmSmallest):
        budget = rule.budget if rule.budget is not None else round(0.10 * ds.n_rows)
        model = mixture.fit_gmm_best(ds, rule.k, restarts=rule.restarts,
                                     seed=rule.seed, encoding=rule.encoding,
                                     floor=rule.floor)
        assign = mixture.predict(model, ds)
        chosen = set(mixture.smallest_clusters(model, assign, budget))
        return np.flatnonzero(np.isin(assign, sorted(chosen)))
    if isinstance(rule, DesignatedClass):
        for col, arr in zip(ds.schema, ds.cols):
            if col.name == rule.column:
                if col.kind != CAT:
                    raise ValueError(f"column {rule.column!r} is not categorical")
                code = col.support.index(rule.label)
                return np.flatnonzero(arr == code)
        raise ValueError(f"no column named {rule.column!r}")
    raise TypeError(f"unknown outlier rule {rule!r}")
