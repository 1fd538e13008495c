"""Finding where the provider's model puts its rarest mass.

One large sample, one mixture fit over a frequency-surprise encoding,
then the smallest clusters up to a row budget. Rows that later land in
those clusters are candidate outliers worth the price of a distance
extraction call.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .. import seeds
from ..mixture import GmmModel, fit_gmm_best, predict, smallest_clusters
from ..tabular.schema import Dataset

# sample-scale slack over n_out: DP noise can inflate how much mass looks
# rare, and on gridded data the tail is tiled by several clusters
BUDGET_FACTOR = 4.0


@dataclass(frozen=True)
class Locator:
    model: GmmModel
    chosen: tuple[int, ...]
    n_train: int

    def keep_mask(self, ds: Dataset) -> np.ndarray:
        if not self.chosen:
            return np.zeros(ds.n_rows, dtype=bool)
        return np.isin(predict(self.model, ds), self.chosen)


def outliers_locator(client, n_train: int, n_out: int, k: int = 10,
                     seed: int = 0, restarts: int = 10,
                     floor: float = 0.02) -> Locator:
    """Fit the locator from a single 3x-train-size sample call."""
    sample = client.sample(3 * n_train, seeds.derive(seed, "locator"))
    model = fit_gmm_best(sample, k, restarts=restarts,
                         seed=seeds.derive(seed, "locator_fit"),
                         encoding="surprise", floor=floor, init="extreme")
    labels = predict(model, sample)
    budget = round(BUDGET_FACTOR * n_out * sample.n_rows / n_train)
    chosen = smallest_clusters(model, labels, budget)
    return Locator(model=model, chosen=tuple(chosen), n_train=n_train)
