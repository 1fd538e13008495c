"""Similarity-based privacy tests and the combined report.

Three tests against a train/test baseline:

* identical match share: fraction of synthetic rows exactly matching some
  train row, passing when it does not exceed the test share;
* distance to closest record: 5th percentile of nearest-train distance,
  passing when the synthetic percentile is at least the test one;
* nearest-neighbor distance ratio: d1/d2 against train (1.0 when d2 is 0),
  same percentile rule.

The report always carries the full statistics; release surfaces are
expected to hide scores when any flag fails (see provider.core).
"""
from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from ..tabular.schema import Dataset
from .nn import METRICS, nn_distances, row_keys


def pct(values: np.ndarray, p: float) -> float:
    # linear interpolation at rank p/100 * (m - 1), numpy's default
    return float(np.percentile(np.asarray(values, dtype=np.float64), p))


@dataclass(frozen=True)
class ImsStats:
    share_synth: float
    share_test: float
    passed: bool


@dataclass(frozen=True)
class TailStats:
    pct5_synth: float
    pct5_test: float
    mean_synth: float
    mean_test: float
    passed: bool


@dataclass(frozen=True)
class PrivacyReport:
    metric: str
    ims: ImsStats
    dcr: TailStats
    nndr: TailStats
    all_passed: bool

    def to_dict(self) -> dict:
        return asdict(self)


def ims_share(train: Dataset, synth: Dataset) -> float:
    """Fraction of synth rows with an exact train match."""
    if synth.n_rows == 0:
        raise ValueError("synth is empty")
    keys = set(row_keys(train))
    hits = sum(1 for k in row_keys(synth) if k in keys)
    return hits / synth.n_rows


def nndr_ratios(d1: np.ndarray, d2: np.ndarray) -> np.ndarray:
    return np.where(d2 == 0.0, 1.0, d1 / np.where(d2 == 0.0, 1.0, d2))


@dataclass(frozen=True)
class Baseline:
    """The (train, test) half of the report, a pure function of the split.

    Providers evaluate many synthetic submissions against one fixed split,
    so this side is computed once and reused; the numbers are identical to
    recomputing per call.
    """

    metric: str
    share_test: float
    dcr_pct5: float
    dcr_mean: float
    nndr_pct5: float
    nndr_mean: float
    train_keys: frozenset


def baseline_stats(train: Dataset, test: Dataset, metric: str) -> Baseline:
    if metric not in METRICS:
        raise ValueError(f"unknown metric {metric!r}")
    if train.n_rows < 2:
        raise ValueError("train needs at least 2 rows")
    if test.n_rows < 2:
        raise ValueError("test needs at least 2 rows")
    keys = frozenset(row_keys(train))
    hits = sum(1 for k in row_keys(test) if k in keys)
    d1_t, _, d2_t = nn_distances(test, train, metric)
    r_t = nndr_ratios(d1_t, d2_t)
    return Baseline(
        metric=metric,
        share_test=hits / test.n_rows,
        dcr_pct5=pct(d1_t, 5), dcr_mean=float(d1_t.mean()),
        nndr_pct5=pct(r_t, 5), nndr_mean=float(r_t.mean()),
        train_keys=keys,
    )


def report_against(base: Baseline, train: Dataset,
                   synth: Dataset) -> PrivacyReport:
    if synth.n_rows < 1:
        raise ValueError("synth is empty")
    hits = sum(1 for k in row_keys(synth) if k in base.train_keys)
    share_synth = hits / synth.n_rows
    ims = ImsStats(share_synth, base.share_test,
                   share_synth <= base.share_test)

    d1_s, _, d2_s = nn_distances(synth, train, base.metric)
    dcr = TailStats(
        pct(d1_s, 5), base.dcr_pct5,
        float(d1_s.mean()), base.dcr_mean,
        pct(d1_s, 5) >= base.dcr_pct5,
    )
    r_s = nndr_ratios(d1_s, d2_s)
    nndr = TailStats(
        pct(r_s, 5), base.nndr_pct5,
        float(r_s.mean()), base.nndr_mean,
        pct(r_s, 5) >= base.nndr_pct5,
    )
    return PrivacyReport(
        metric=base.metric, ims=ims, dcr=dcr, nndr=nndr,
        all_passed=ims.passed and dcr.passed and nndr.passed,
    )


def privacy_report(train: Dataset, test: Dataset, synth: Dataset,
                   metric: str) -> PrivacyReport:
    return report_against(baseline_stats(train, test, metric), train, synth)
