"""Attack experiments against black-box providers: membership and
attribute inference, reconstruction at desk scale, and the privacy-utility
sweep over differential-privacy budgets.

Every experiment builds its own provider from a master seed and returns a
RunReport; call totals come straight from the provider's ledger.
"""
from __future__ import annotations

import math
import time

import numpy as np

from .. import seeds
from ..attacks import (
    ANY_RECORD,
    OUTLIERS_ONLY,
    AttackConfig,
    evaluate_attack,
    difference_attribute,
    difference_membership,
    membership_base,
    reconsyn,
)
from ..metrics.nn import row_keys
from ..provider import InProcessClient, provider_new
from ..synthesis.adapter import DiscretizedSampler
from ..synthesis.dp import DpBudget
from ..synthesis.models import fit as fit_model
from ..synthesis.utility import marginal_diff, mi_diff
from ..tabular.discretize import apply_discretizer, fit_discretizer
from ..tabular.generate import gen_censuslite, gen_gauss, split
from ..tabular.outliers import RADIUS_BY_DIM, GmmSmallest, Radius, label_outliers
from .report import RunReport

CENSUS_N = 6000
GAUSS_N = 2000


def _census_setup(model_kind: str, dp: DpBudget | None, seed: int):
    data = gen_censuslite(CENSUS_N, seed)
    provider = provider_new(data, model_kind, dp=dp, seed=seed)
    train, test = split(data, seed)
    return provider, train, test


def _census_outliers(train) -> np.ndarray:
    # deterministic labeling rule: smallest mixture components up to a
    # tenth of the data
    return label_outliers(train, GmmSmallest())


def _distinct_rows(ds, n: int) -> list[int]:
    keys = row_keys(ds)
    seen: set = set()
    picked = []
    for i, k in enumerate(keys):
        if k not in seen:
            seen.add(k)
            picked.append(i)
            if len(picked) == n:
                return picked
    raise ValueError(f"only {len(picked)} distinct rows, wanted {n}")


def _absent_rows(train, test, n: int) -> list[int]:
    """Test rows whose cell value is not present anywhere in train."""
    train_keys = set(row_keys(train))
    seen: set = set()
    picked = []
    for i, k in enumerate(row_keys(test)):
        if k in train_keys or k in seen:
            continue
        seen.add(k)
        picked.append(i)
        if len(picked) == n:
            return picked
    raise ValueError(f"only {len(picked)} usable non-member rows, wanted {n}")


def _auc(member_scores, nonmember_scores) -> float:
    wins = ties = 0
    for m in member_scores:
        for o in nonmember_scores:
            if m > o:
                wins += 1
            elif m == o:
                ties += 1
    return (wins + 0.5 * ties) / (len(member_scores) * len(nonmember_scores))


def membership_experiment(model_kind: str = "independent", n_each: int = 100,
                          seed: int = 0, dp: DpBudget | None = None) -> RunReport:
    """Membership inference with two metrics calls per target: the base
    dataset's match count either moves when the target is appended or it
    does not."""
    t0 = time.monotonic()
    provider, train, test = _census_setup(model_kind, dp, seed)
    client = InProcessClient(provider)

    members = _distinct_rows(train, n_each)
    nonmembers = _absent_rows(train, test, n_each)

    base = membership_base(client, seed=seeds.derive(seed, "base"))
    setup = client.stats()
    member_scores = [
        int(difference_membership(client, base, train.canon_record(i)))
        for i in members
    ]
    nonmember_scores = [
        int(difference_membership(client, base, test.canon_record(i)))
        for i in nonmembers
    ]
    used = client.stats()

    auc = _auc(member_scores, nonmember_scores)
    metric_calls = used["metric_calls"] - setup["metric_calls"]
    report = RunReport(f"membership-{model_kind}", seed, {
        "model": model_kind, "eps": str(dp.eps) if dp else None,
        "n_members": n_each, "n_nonmembers": n_each,
    })
    report.results = {
        "auc": auc,
        "true_positives": int(sum(member_scores)),
        "true_negatives": int(n_each - sum(nonmember_scores)),
        "metric_calls": metric_calls,
        "setup_calls": setup,
    }
    report.checks = {
        "auc_is_exactly_1": auc == 1.0,
        "two_calls_per_target": metric_calls == 2 * 2 * n_each,
    }
    report.timings["total_s"] = time.monotonic() - t0
    return report.require()


def _unique_completion_rows(train, col: int, n: int) -> list[int]:
    """Train rows whose value in ``col`` is the only candidate matching
    the rest of the record anywhere in train."""
    keys = set(map(tuple, (tuple(train.canon_record(i)) for i in range(train.n_rows))))
    support = train.schema[col].support
    seen: set = set()
    picked = []
    for i in range(train.n_rows):
        rec = list(train.canon_record(i))
        partial = tuple(v for j, v in enumerate(rec) if j != col)
        if partial in seen:
            continue
        seen.add(partial)
        hits = 0
        for cand in support:
            rec[col] = cand
            hits += tuple(rec) in keys
        if hits == 1:
            picked.append(i)
            if len(picked) == n:
                return picked
    raise ValueError(f"only {len(picked)} unique-completion rows, wanted {n}")


def attribute_experiment(model_kind: str = "independent", n_targets: int = 100,
                         column: str = "occupation", seed: int = 0,
                         dp: DpBudget | None = None) -> RunReport:
    """Attribute inference on partial records with a unique consistent
    completion: one call per candidate value."""
    t0 = time.monotonic()
    provider, train, test = _census_setup(model_kind, dp, seed)
    client = InProcessClient(provider)
    col = [c.name for c in train.schema].index(column)
    candidates = list(train.schema[col].support)

    targets = _unique_completion_rows(train, col, n_targets)
    base = membership_base(client, seed=seeds.derive(seed, "base"))
    base_resp = client.metrics(base)
    n = round(base_resp.scores["ims"]["share_synth"] * base.n_rows)
    setup = client.stats()

    correct = 0
    low_conf = 0
    for i in targets:
        rec = train.canon_record(i)
        truth = rec[col]
        guess = difference_attribute(client, base, rec, col, candidates,
                                     base_count=n)
        correct += guess.value == truth
        low_conf += guess.low_confidence
    used = client.stats()

    accuracy = correct / n_targets
    metric_calls = used["metric_calls"] - setup["metric_calls"]
    report = RunReport(f"attribute-{model_kind}", seed, {
        "model": model_kind, "eps": str(dp.eps) if dp else None,
        "n_targets": n_targets, "column": column, "k": len(candidates),
    })
    report.results = {
        "accuracy": accuracy,
        "low_confidence": low_conf,
        "metric_calls": metric_calls,
        "setup_calls": setup,
    }
    report.checks = {
        "accuracy_is_exactly_1": accuracy == 1.0,
        "k_calls_per_target": metric_calls == len(candidates) * n_targets,
    }
    report.timings["total_s"] = time.monotonic() - t0
    return report.require()


def gauss_attack_experiment(rounds: int = 1000, seed: int = 0,
                            n_bins: int = 200) -> RunReport:
    """Multi-round sampling against a provider whose model never saw the
    train data: reconstructed outliers come entirely from the filter-free
    metrics interface. Search is disabled; sampling alone must carry it."""
    t0 = time.monotonic()
    ds = gen_gauss(2, GAUSS_N, seed)
    train_c, _ = split(ds, seed)
    out_idx = label_outliers(train_c, Radius(RADIUS_BY_DIM[2]))

    oracle = fit_model("oracle", train_c)
    disc = fit_discretizer(ds, "uniform", n_bins)
    dds = apply_discretizer(disc, ds)
    provider = provider_new(dds, DiscretizedSampler(oracle, disc), seed=seed)
    dtrain, _ = split(dds, seed)

    config = AttackConfig(
        n_train=dtrain.n_rows, n_out=len(out_idx), rounds=rounds,
        search_threshold=0.0, seed=seeds.derive(seed, "attack"),
    )
    result = reconsyn(InProcessClient(provider), config)
    ev = evaluate_attack(result, dtrain, out_idx)

    report = RunReport("sample-attack-gauss", seed, {
        "dim": 2, "n": GAUSS_N, "n_bins": n_bins, "rounds": rounds,
    })
    report.results = {"evaluation": ev, "calls": result.calls_used}
    report.checks = {
        "recall_ge_0.90": ev["recall"] >= 0.90,
        "precision_exactly_1": ev["precision"] == 1.0,
    }
    report.timings["total_s"] = time.monotonic() - t0
    report.attack_result = result  # claims artifact, kept off the report
    return report.require()


def census_attack_experiment(model_kind: str, dp: DpBudget | None = None,
                             rounds: int = 1000, d_sra: int = 2,
                             seed: int = 0) -> RunReport:
    """Full reconstruction of the labeled outliers on the categorical
    benchmark: locate the tail, sample it out, then close the remainder
    by bounded perturbation search."""
    t0 = time.monotonic()
    provider, train, test = _census_setup(model_kind, dp, seed)
    out_idx = _census_outliers(train)

    config = AttackConfig(
        n_train=train.n_rows, n_out=len(out_idx), rounds=rounds,
        d_sra=d_sra, seed=seeds.derive(seed, "attack"),
    )
    result = reconsyn(InProcessClient(provider), config)
    ev = evaluate_attack(result, train, out_idx)

    report = RunReport(f"reconsyn-{model_kind}", seed, {
        "model": model_kind, "eps": str(dp.eps) if dp else None,
        "n": CENSUS_N, "rounds": rounds, "d_sra": d_sra,
    })
    report.results = {"evaluation": ev, "calls": result.calls_used}
    report.checks = {
        "recall_ge_0.95": ev["recall"] >= 0.95,
        "precision_exactly_1": ev["precision"] == 1.0,
    }
    report.timings["total_s"] = time.monotonic() - t0
    report.attack_result = result  # claims artifact, kept off the report
    return report.require()


def any_record_experiment(model_kind: str, rounds: int = 1000,
                          seed: int = 0) -> RunReport:
    """No-memorization check: against models that cannot memorize, the
    any-record mode still rebuilds most of the train data, outliers
    included, because the metrics interface answers for every cell."""
    t0 = time.monotonic()
    provider, train, test = _census_setup(model_kind, None, seed)
    out_idx = _census_outliers(train)

    config = AttackConfig(
        n_train=train.n_rows, n_out=len(out_idx), rounds=rounds,
        target_mode=ANY_RECORD, seed=seeds.derive(seed, "attack"),
    )
    result = reconsyn(InProcessClient(provider), config)
    ev_all = evaluate_attack(result, train, list(range(train.n_rows)))
    ev_out = evaluate_attack(result, train, out_idx)

    report = RunReport(f"any-record-{model_kind}", seed, {
        "model": model_kind, "n": CENSUS_N, "rounds": rounds,
    })
    report.results = {
        "train_rows": ev_all,
        "labeled_outliers": ev_out,
        "calls": result.calls_used,
    }
    report.checks = {
        "train_recall_ge_0.75": ev_all["recall"] >= 0.75,
        "outlier_recall_is_1": ev_out["recall"] == 1.0,
        "precision_exactly_1": ev_all["precision"] == 1.0,
    }
    report.timings["total_s"] = time.monotonic() - t0
    report.attack_result = result  # claims artifact, kept off the report
    return report.require()


def _budget(eps: float) -> DpBudget | None:
    return None if math.isinf(eps) else DpBudget(eps)


def dp_sweep(models=("independent", "privbayes_lite"),
             eps_grid=(0.1, 1.0, math.inf), n_seeds: int = 5,
             rounds: int = 1000, seed: int = 0) -> RunReport:
    """Privacy-utility trade-off: reconstruction recall stays high at
    every budget while utility falls as the budget tightens, so DP
    training alone does not close the metrics side channel."""
    t0 = time.monotonic()
    cells = []
    for model_kind in models:
        for eps in eps_grid:
            for i in range(n_seeds):
                sub = seeds.derive(seed, "sweep", model_kind, eps, i)
                data = gen_censuslite(CENSUS_N, sub)
                provider = provider_new(data, model_kind, dp=_budget(eps),
                                        seed=sub)
                train, _ = split(data, sub)
                out_idx = _census_outliers(train)
                config = AttackConfig(
                    n_train=train.n_rows, n_out=len(out_idx), rounds=rounds,
                    seed=seeds.derive(sub, "attack"),
                )
                result = reconsyn(InProcessClient(provider), config)
                ev = evaluate_attack(result, train, out_idx)

                synth = provider.sample(train.n_rows,
                                        seed=seeds.derive(sub, "utility"))
                m_diff = marginal_diff(train, synth)
                i_diff = mi_diff(train, synth)
                cells.append({
                    "model": model_kind, "eps": str(eps), "seed_index": i,
                    "recall": ev["recall"], "precision": ev["precision"],
                    "marginal_diff": m_diff, "mi_diff": i_diff,
                    "utility": 1.0 - 0.5 * (m_diff + i_diff),
                    "n_outliers": ev["n_targets"],
                })

    report = RunReport("dp-sweep", seed, {
        "models": list(models), "eps_grid": [str(e) for e in eps_grid],
        "n_seeds": n_seeds, "n": CENSUS_N, "rounds": rounds,
    })
    means = {}
    for model_kind in models:
        per_eps = []
        for eps in eps_grid:
            vals = [c["utility"] for c in cells
                    if c["model"] == model_kind and c["eps"] == str(eps)]
            per_eps.append((eps, sum(vals) / len(vals)))
        # grid ordered by decreasing protection: utility must rise with eps
        per_eps.sort(key=lambda t: t[0])
        means[model_kind] = per_eps
        report.checks[f"utility_monotone_{model_kind}"] = all(
            a[1] < b[1] for a, b in zip(per_eps, per_eps[1:]))
    report.checks["recall_ge_0.95_everywhere"] = all(
        c["recall"] >= 0.95 for c in cells)
    report.results = {
        "cells": cells,
        "mean_utility": {m: [{"eps": str(e), "utility": u} for e, u in v]
                         for m, v in means.items()},
    }
    report.timings["total_s"] = time.monotonic() - t0
    return report.require()
