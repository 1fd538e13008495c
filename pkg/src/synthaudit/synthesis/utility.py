"""Downstream-utility comparison between a categorical table and its
synthetic counterpart.

Two scalars, both in [0, 1], both 0 for a perfect copy:

* marginal_diff: mean per-column total-variation distance of the 1-way
  marginals;
* mi_diff: mean absolute difference of pairwise mutual information,
  normalized by the smaller marginal entropy (pairs where either dataset
  has a zero-entropy column contribute 0).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..tabular.schema import CAT, Dataset


@dataclass(frozen=True)
class UtilityScore:
    marginal_diff: float
    mi_diff: float


def _check(train: Dataset, synth: Dataset):
    if train.schema != synth.schema:
        raise ValueError("train and synth schemas differ")
    for col in train.schema:
        if col.kind != CAT:
            raise ValueError("utility scores need categorical columns")
    if train.n_rows == 0 or synth.n_rows == 0:
        raise ValueError("empty input")


def _marginal(ds: Dataset, c: int) -> np.ndarray:
    counts = np.bincount(ds.cols[c], minlength=len(ds.schema[c].support))
    return counts / ds.n_rows


def _pair_nmi(ds: Dataset, i: int, j: int) -> float:
    ci = len(ds.schema[i].support)
    cj = len(ds.schema[j].support)
    joint = np.zeros((ci, cj))
    np.add.at(joint, (ds.cols[i], ds.cols[j]), 1.0)
    p = joint / ds.n_rows
    pi = p.sum(axis=1)
    pj = p.sum(axis=0)
    with np.errstate(divide="ignore", invalid="ignore"):
        mi = float(np.nansum(p * np.log(p / np.outer(pi, pj))))
        hi = float(-np.nansum(pi * np.log(pi)))
        hj = float(-np.nansum(pj * np.log(pj)))
    h = min(hi, hj)
    if h <= 0.0:
        return 0.0
    return max(0.0, min(1.0, mi / h))


def marginal_diff(train: Dataset, synth: Dataset) -> float:
    _check(train, synth)
    diffs = [
        0.5 * float(np.abs(_marginal(train, c) - _marginal(synth, c)).sum())
        for c in range(train.n_cols)
    ]
    return float(np.mean(diffs))


def mi_diff(train: Dataset, synth: Dataset) -> float:
    _check(train, synth)
    d = train.n_cols
    if d < 2:
        return 0.0
    diffs = []
    for i in range(d):
        for j in range(i + 1, d):
            a = _pair_nmi(train, i, j)
            b = _pair_nmi(synth, i, j)
            # a zero-entropy column in either table makes the pair silent
            if a == 0.0 and b == 0.0:
                diffs.append(0.0)
            else:
                diffs.append(abs(a - b))
    return float(np.mean(diffs))


def utility(train: Dataset, synth: Dataset) -> UtilityScore:
    return UtilityScore(marginal_diff(train, synth), mi_diff(train, synth))
