"""Black-box synthetic data provider.

The provider owns a private train/test split and a fitted generator. The
outside world gets exactly three capabilities: draw synthetic samples,
submit a dataset for privacy evaluation, and read the call counters.
Train and test rows never cross that boundary; detailed scores only do
when every privacy test passes.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass, field

from ..metrics.filters import outlier_filter, similarity_filter
from ..metrics.report import baseline_stats, report_against
from ..tabular.generate import split
from ..tabular.schema import Column, Dataset, SchemaError
from ..synthesis.dp import DpBudget
from ..synthesis.models import fit as fit_model
from .. import seeds


@dataclass(frozen=True)
class FilterConfig:
    """Privacy filters applied to every sample before release.

    ``sf_tau`` drops rows within tau of a train row; ``of_percentile``
    drops rows farther from train than that percentile of train's own
    leave-one-out neighbor distances. ``None`` disables a filter.
    """

    sf_tau: float | None = None
    of_percentile: float | None = None


@dataclass(frozen=True)
class MetricsResponse:
    flags: dict[str, bool]
    scores: dict | None

    def __post_init__(self):
        if (self.scores is not None) != all(self.flags.values()):
            raise ValueError("scores must be present exactly when all tests pass")

    @property
    def all_passed(self) -> bool:
        return all(self.flags.values())

    def to_dict(self) -> dict:
        return {"flags": dict(self.flags), "scores": self.scores}


class QuotaError(RuntimeError):
    """Raised once a provider's total call allowance is spent."""


class Provider:
    """In-process provider; see module docstring for the access rules."""

    def __init__(self, train: Dataset, test: Dataset, model, metric: str,
                 filters: FilterConfig | None = None, seed: int = 0,
                 quota: int | None = None):
        self._train = train
        self._test = test
        self._model = model
        self._metric = metric
        # the train/test half of every report is fixed at construction
        self._baseline = baseline_stats(train, test, metric)
        self._filters = filters or FilterConfig()
        self._seed = seed
        self._quota = quota
        self._lock = threading.Lock()
        self._sample_calls = 0
        self._metric_calls = 0

    @property
    def schema(self) -> tuple[Column, ...]:
        return self._train.schema

    @property
    def metric(self) -> str:
        return self._metric

    def _charge(self, counter: str) -> int:
        with self._lock:
            if self._quota is not None:
                if self._sample_calls + self._metric_calls >= self._quota:
                    raise QuotaError("provider call quota exhausted")
            n = getattr(self, counter) + 1
            setattr(self, counter, n)
            return n

    def sample(self, n: int, seed: int | None = None) -> Dataset:
        if n < 0:
            raise ValueError("n must be nonnegative")
        call_no = self._charge("_sample_calls")
        if seed is None:
            seed = seeds.derive(self._seed, "provider_sample", call_no)
        out = self._model.sample(n, seed)
        if self._filters.sf_tau is not None:
            out = similarity_filter(self._train, out, self._filters.sf_tau,
                                    self._metric)
        if self._filters.of_percentile is not None:
            out = outlier_filter(self._train, out,
                                 self._filters.of_percentile, self._metric)
        return out

    def metrics(self, synth: Dataset) -> MetricsResponse:
        names = [(c.name, c.kind) for c in synth.schema]
        expect = [(c.name, c.kind) for c in self._train.schema]
        if names != expect:
            raise SchemaError(f"metrics schema mismatch: {names} != {expect}")
        self._charge("_metric_calls")
        # per-submission results are never cached; only the fixed split side is
        rep = report_against(self._baseline, self._train, synth)
        flags = {"ims": rep.ims.passed, "dcr": rep.dcr.passed,
                 "nndr": rep.nndr.passed}
        scores = rep.to_dict() if rep.all_passed else None
        return MetricsResponse(flags=flags, scores=scores)

    def stats(self) -> dict[str, int]:
        with self._lock:
            return {"sample_calls": self._sample_calls,
                    "metric_calls": self._metric_calls}


def provider_new(data: Dataset, model, dp: DpBudget | None = None,
                 metric: str = "hamming", filters: FilterConfig | None = None,
                 seed: int = 0, quota: int | None = None) -> Provider:
    """Split ``data``, fit (or adopt) the generator, return a fresh provider.

    ``model`` is either a model-kind name, fitted here on the train half,
    or an already-fitted sampler (anything with ``sample(n, seed)``), which
    is how discretized or file-backed generators plug in.
    """
    if data.n_rows % 2 != 0:
        raise ValueError("provider data must have an even number of rows")
    train, test = split(data, seed)
    if isinstance(model, str):
        model = fit_model(model, train, dp=dp, seed=seeds.derive(seed, "fit"))
    return Provider(train, test, model, metric, filters, seed, quota)
