"""Reconstruction from samples and local search.

SampleAttack: draw rounds of synthetic data, keep rows the locator flags
as outlier-cluster material, learn each new row's exact train distance
through the padding oracle, and claim the zeros. SearchAttack: take every
near-miss in the accumulated history, identify which columns are wrong by
probing one-column perturbations, then enumerate those columns' supports.
All knowledge lives in the History: record -> exact distance, insertion
ordered.
"""
from __future__ import annotations

import heapq
import json
from dataclasses import dataclass, field

import numpy as np

from .. import seeds
from ..tabular.schema import CAT, Dataset, from_records
from .locator import Locator, outliers_locator
from .padding import PaddingRecord, bootstrap_padding, extract_distance

OUTLIERS_ONLY = "outliers_only"
ANY_RECORD = "any_record"


@dataclass(frozen=True)
class AttackConfig:
    n_train: int
    n_out: int
    rounds: int = 1000
    d_sra: int = 2
    m: int = 100
    k: int = 10
    one_call: bool = False
    target_mode: str = OUTLIERS_ONLY
    search_threshold: float = 0.95
    call_budget: int | None = None
    seed: int = 0

    def __post_init__(self):
        if self.rounds < 1 or self.d_sra < 1 or self.m < 1:
            raise ValueError("rounds, d_sra and m must all be >= 1")
        if self.target_mode not in (OUTLIERS_ONLY, ANY_RECORD):
            raise ValueError(f"unknown target mode {self.target_mode!r}")


@dataclass
class AttackResult:
    mode: str
    reconstructed: list[tuple]
    calls_used: dict[str, int]
    trace: list[dict]

    def to_json(self) -> str:
        return json.dumps({
            "mode": self.mode,
            "reconstructed": [list(r) for r in self.reconstructed],
            "calls_used": self.calls_used,
            "trace": self.trace,
        }, sort_keys=True, separators=(",", ":"))


class _Ledger:
    """Local call accounting so a budget can stop the attack mid-flight."""

    def __init__(self, budget: int | None):
        self.budget = budget
        self.used = 0

    def spend(self) -> bool:
        if self.budget is not None and self.used >= self.budget:
            return False
        self.used += 1
        return True


def _keep_indices(locator: Locator | None, ds: Dataset) -> range | np.ndarray:
    if locator is None or ds.n_rows == 0:
        return range(ds.n_rows)
    return np.flatnonzero(locator.keep_mask(ds))


def sample_attack(client, locator: Locator | None, padding: PaddingRecord,
                  config: AttackConfig,
                  history: dict | None = None) -> tuple[list, dict, list]:
    """Returns (reconstructed keys, history, per-round trace)."""
    history = {} if history is None else history
    reconstructed = [k for k, d in history.items() if d == 0.0]
    ledger = _Ledger(config.call_budget)
    trace = []
    for r in range(config.rounds):
        if not ledger.spend():
            break
        s = client.sample(config.n_train, seeds.derive(config.seed, "sma", r))
        kept = _keep_indices(locator, s)
        extracted = 0
        for i in kept:
            key = s.canon_record(int(i))
            if key in history:
                continue
            if not ledger.spend():
                trace.append({"round": r, "kept": len(kept),
                              "extracted": extracted,
                              "reconstructed": len(reconstructed)})
                return reconstructed, history, trace
            d = extract_distance(client, padding, s.record(int(i)))
            history[key] = d
            extracted += 1
            if d == 0.0:
                reconstructed.append(key)
        trace.append({"round": r, "kept": len(kept), "extracted": extracted,
                      "reconstructed": len(reconstructed)})
    return reconstructed, history, trace


def sample_attack_one_call(client, locator: Locator | None, n: int,
                           seed: int = 0) -> list[tuple]:
    """One sample call, one metrics call: rank candidates by duplicate
    count and claim as many as the call's exact-match count."""
    s = client.sample(n, seeds.derive(seed, "one_call"))
    kept = _keep_indices(locator, s)
    counts: dict[tuple, int] = {}
    for i in kept:
        key = s.canon_record(int(i))
        counts[key] = counts.get(key, 0) + 1
    if not counts:
        return []
    distinct = list(counts)
    resp = client.metrics(from_records(client.schema, distinct))
    if resp.scores is None:
        # a failing call hides the count; claim everything rather than
        # nothing so the single allowed call is not wasted
        j = len(distinct)
    else:
        j = round(resp.scores["ims"]["share_synth"] * len(distinct))
    ranked = sorted(distinct, key=lambda k: -counts[k])
    return ranked[:j]


def _supports(client) -> list[tuple[str, ...]]:
    sup = []
    for col in client.schema:
        if col.kind != CAT:
            raise ValueError("search attack needs categorical columns")
        sup.append(col.support)
    return sup


def search_attack(client, locator: Locator | None, padding: PaddingRecord,
                  history: dict, config: AttackConfig) -> tuple[list, dict]:
    """Extend history around near misses; returns (new zero-distance keys,
    history). Records with distance in [1, d_sra] are worklist items,
    including ones discovered during the search itself."""
    supports = _supports(client)
    n_cols = len(supports)
    ledger = _Ledger(config.call_budget)
    found = []
    seq = 0
    heap: list[tuple[float, int, tuple]] = []
    for key, d in history.items():
        if 1.0 <= d <= config.d_sra:
            heapq.heappush(heap, (d, seq, key))
        seq += 1
    done = set()

    def learn(key: tuple) -> float | None:
        nonlocal seq
        if key in history:
            return history[key]
        if not ledger.spend():
            return None
        d = extract_distance(client, padding, key)
        history[key] = d
        if d == 0.0:
            found.append(key)
        elif d <= config.d_sra:
            heapq.heappush(heap, (d, seq, key))
        seq += 1
        return d

    while heap:
        d_rec, _, rec = heapq.heappop(heap)
        if rec in done:
            continue
        done.add(rec)
        # probe one cyclic replacement per column; a column whose probe
        # does not move the distance up is one the record has wrong
        cols_to_fix = []
        for c in range(n_cols):
            vals = supports[c]
            nxt = vals[(vals.index(rec[c]) + 1) % len(vals)]
            d_pert = learn(rec[:c] + (nxt,) + rec[c + 1:])
            if d_pert is None:
                return found, history
            if d_pert <= d_rec:
                cols_to_fix.append(c)
        for c in cols_to_fix:
            cands = [rec[:c] + (v,) + rec[c + 1:] for v in supports[c]
                     if rec[:c] + (v,) + rec[c + 1:] not in history]
            if not cands:
                continue
            if locator is not None:
                mask = locator.keep_mask(from_records(client.schema, cands))
                cands = [cand for cand, keep in zip(cands, mask) if keep]
            for cand in cands:
                if learn(cand) is None:
                    return found, history
    return found, history


def reconsyn(client, config: AttackConfig) -> AttackResult:
    """Locator, then SampleAttack, then SearchAttack if the claim count
    still falls short of the target count."""
    start = client.stats()
    locator = None
    if config.target_mode == OUTLIERS_ONLY:
        locator = outliers_locator(client, config.n_train, config.n_out,
                                   k=config.k,
                                   seed=seeds.derive(config.seed, "loc"))
    if config.one_call:
        claims = sample_attack_one_call(client, locator, config.n_train,
                                        seed=config.seed)
        end = client.stats()
        return AttackResult(
            mode="one_call", reconstructed=claims,
            calls_used={k: end[k] - start[k] for k in end},
            trace=[{"claimed": len(claims)}])

    padding = bootstrap_padding(client, m=config.m,
                                seed=seeds.derive(config.seed, "pad"))
    reconstructed, history, trace = sample_attack(client, locator, padding,
                                                  config)
    n_targets = (config.n_out if config.target_mode == OUTLIERS_ONLY
                 else config.n_train)
    searched = False
    if len(reconstructed) < config.search_threshold * n_targets:
        searched = True
        extra, history = search_attack(client, locator, padding, history,
                                       config)
        reconstructed = reconstructed + extra
    end = client.stats()
    trace.append({"search": searched, "reconstructed": len(reconstructed)})
    return AttackResult(
        mode=config.target_mode, reconstructed=reconstructed,
        calls_used={k: end[k] - start[k] for k in end},
        trace=trace)
