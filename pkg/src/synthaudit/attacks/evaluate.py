"""Harness-side scoring of attack output against ground truth.

Never available to the adversary: needs the hidden train rows and the
true outlier labels.
"""
from __future__ import annotations

from ..tabular.schema import Dataset


def evaluate_attack(result, train: Dataset, target_indices) -> dict:
    """Recall over target rows, precision over claimed records.

    A target row counts as recovered when its (canonical) record was
    claimed; duplicated cells recover every row sharing them. An empty
    claim set scores precision 1.0 by convention, flagged.
    """
    targets = list(target_indices)
    if not targets:
        raise ValueError("empty target set")
    claimed = set(map(tuple, result.reconstructed))
    train_cells = {train.canon_record(i) for i in range(train.n_rows)}
    hit = sum(1 for i in targets if train.canon_record(int(i)) in claimed)
    out = {
        "recall": hit / len(targets),
        "n_targets": len(targets),
        "n_claimed": len(claimed),
        "calls": dict(result.calls_used),
        "empty_claims": not claimed,
    }
    if claimed:
        out["precision"] = sum(1 for c in claimed if c in train_cells) / len(claimed)
    else:
        out["precision"] = 1.0
    return out
