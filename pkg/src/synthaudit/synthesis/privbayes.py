"""Greedy Bayesian-network synthesizer for categorical tables.

Structure: nodes are added one at a time; each step scores every
(remaining column, parent subset) pair by empirical mutual information and
picks the best, where parent subsets are drawn from the already-added
nodes with size capped by the effective parent budget. Under a finite
budget the pick uses the exponential mechanism (Gumbel-max form) with half
the epsilon, and conditional count tables get Laplace noise with the other
half. A usefulness rule shrinks the parent cap first: when the per-cell
expected count would drown in the noise scale, large tables only spend
signal, so the cap drops (possibly to zero, degrading gracefully to a
noisy independent model).
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .. import seeds
from ..tabular.schema import CAT, Dataset, from_arrays
from .dp import DpBudget
from .models import _noisy_probs

THETA_MIN = 4.0


def _mutual_information(child: np.ndarray, child_card: int,
                        parents: list[np.ndarray], cards: list[int]) -> float:
    """Empirical MI in bits between a column and a (possibly empty) group."""
    if not parents:
        return 0.0
    combo = np.zeros(child.shape[0], dtype=np.int64)
    stride = 1
    for arr, card in zip(parents, cards):
        combo += arr * stride
        stride *= card
    joint = np.zeros((stride, child_card))
    np.add.at(joint, (combo, child), 1.0)
    n = joint.sum()
    pj = joint / n
    px = pj.sum(axis=1, keepdims=True)
    py = pj.sum(axis=0, keepdims=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = pj * np.log2(pj / (px * py))
    return float(np.nansum(terms))


def effective_parent_cap(n: int, cards: list[int], eps: float,
                         max_parents: int) -> int:
    if math.isinf(eps):
        return max_parents
    b = 2.0 * len(cards) / eps
    avg = float(np.mean(cards))
    cap = 0
    for p in range(max_parents + 1):
        if n >= THETA_MIN * b * avg ** (p + 1):
            cap = p
    return cap


@dataclass(frozen=True)
class PrivBayesModel:
    schema: tuple
    order: tuple[int, ...]                   # column indices, ancestral order
    parents: tuple[tuple[int, ...], ...]     # per ordered node
    tables: tuple[np.ndarray, ...]           # (n_combos, child_card) probs
    dp: DpBudget | None

    def sample(self, n: int, seed: int) -> Dataset:
        r = seeds.rng(seed, "privbayes-sample", n)
        cards = [len(c.support) for c in self.schema]
        drawn: dict[int, np.ndarray] = {}
        for node, pars, table in zip(self.order, self.parents, self.tables):
            if not pars:
                codes = r.choice(cards[node], size=n, p=table[0])
            else:
                combo = np.zeros(n, dtype=np.int64)
                stride = 1
                for p in pars:
                    combo += drawn[p] * stride
                    stride *= cards[p]
                codes = np.empty(n, dtype=np.int64)
                for cidx in np.unique(combo):
                    mask = combo == cidx
                    codes[mask] = r.choice(
                        cards[node], size=int(mask.sum()), p=table[cidx]
                    )
            drawn[node] = codes
        cols = [drawn[i].astype(np.int32) for i in range(len(self.schema))]
        return from_arrays(self.schema, cols, provenance="privbayes_lite")


def fit_privbayes(train: Dataset, dp: DpBudget | None = None, seed: int = 0,
                  max_parents: int = 2) -> PrivBayesModel:
    for col in train.schema:
        if col.kind != CAT:
            raise ValueError("privbayes_lite needs categorical columns")
    d = train.n_cols
    n = train.n_rows
    if n < 1 or d < 1:
        raise ValueError("cannot fit on empty data")
    dp = dp.resolved(n) if dp is not None else None
    eps = dp.eps if dp is not None else math.inf
    cards = [len(c.support) for c in train.schema]
    cap = effective_parent_cap(n, cards, eps, max_parents)
    r = seeds.rng(seed, "privbayes-fit")

    # loose sensitivity bound for empirical MI under one-row change
    delta_mi = (2.0 / n) * math.log2(max(n, 2)) + 2.0 / n
    eps_step = (eps / 2.0) / d if math.isfinite(eps) else math.inf

    if cap == 0:
        # Every candidate structure is the empty graph, so selection looks
        # at no data and costs no budget: schema order, full eps on tables.
        eps_step = math.inf

    order: list[int] = []
    parents: list[tuple[int, ...]] = []
    remaining = list(range(d))
    while remaining:
        p_size = min(len(order), cap)
        candidates = []
        for node in remaining:
            for subset in itertools.combinations(order, p_size):
                score = _mutual_information(
                    train.cols[node], cards[node],
                    [train.cols[p] for p in subset],
                    [cards[p] for p in subset],
                )
                candidates.append((node, subset, score))
        if math.isfinite(eps_step):
            gumbel = r.gumbel(0.0, 2.0 * delta_mi / eps_step, size=len(candidates))
            best = max(range(len(candidates)),
                       key=lambda i: candidates[i][2] + gumbel[i])
        else:
            best = max(range(len(candidates)), key=lambda i: candidates[i][2])
        node, subset, _ = candidates[best]
        order.append(node)
        parents.append(subset)
        remaining.remove(node)

    # conditional tables: eps/2 split across the d tables, or all of eps
    # when no budget was spent on structure
    if not math.isfinite(eps):
        scale = 0.0
    elif cap == 0:
        scale = d / eps
    else:
        scale = 2.0 * d / eps
    tables = []
    for node, pars in zip(order, parents):
        n_combos = int(np.prod([cards[p] for p in pars])) if pars else 1
        counts = np.zeros((n_combos, cards[node]))
        if pars:
            combo = np.zeros(n, dtype=np.int64)
            stride = 1
            for p in pars:
                combo += train.cols[p] * stride
                stride *= cards[p]
            np.add.at(counts, (combo, train.cols[node]), 1.0)
        else:
            np.add.at(counts[0], train.cols[node], 1.0)
        probs = np.stack([_noisy_probs(row, scale, r) for row in counts])
        tables.append(probs)

    return PrivBayesModel(train.schema, tuple(order), tuple(parents),
                          tuple(tables), dp)
