"""Release-side privacy filters.

The similarity filter drops synthetic rows too close to the train set.
The outlier filter drops synthetic rows farther from train than the p-th
percentile of the train set's own leave-self-out neighbor distances, i.e.
rows that look like they live outside the populated region. Both preserve
survivor order and are idempotent.
"""
from __future__ import annotations

import numpy as np

from ..tabular.schema import Dataset
from .nn import loo_nn_distances, nn_distances
from .report import pct


def similarity_filter(train: Dataset, synth: Dataset, tau: float,
                      metric: str) -> Dataset:
    """Keep synth rows with nearest-train distance strictly above tau."""
    if synth.n_rows == 0:
        return synth
    d1, _, _ = nn_distances(synth, train, metric)
    return synth.select(np.flatnonzero(d1 > tau))


def outlier_cutoff(train: Dataset, metric: str, percentile: float = 95.0) -> float:
    return pct(loo_nn_distances(train, metric), percentile)


def outlier_filter(train: Dataset, synth: Dataset, percentile: float = 95.0,
                   metric: str = "hamming") -> Dataset:
    """Keep synth rows whose nearest-train distance is within the train
    set's own p-th percentile neighbor distance."""
    if synth.n_rows == 0:
        return synth
    cut = outlier_cutoff(train, metric, percentile)
    d1, _, _ = nn_distances(synth, train, metric)
    return synth.select(np.flatnonzero(d1 <= cut))
