"""Membership and attribute inference from IMS differences.

Both attacks compare a metrics call on a fixed passing base dataset with
calls on the base plus one extra record. The exact-match count of the
base is known, so any increase attributes the match to the added record.
The count is read from the visible scores when the augmented call still
passes, and from the IMS flag flipping to fail when it does not; either
way the signal is exact counting, so separation is structural.
"""
from __future__ import annotations

from dataclasses import dataclass

from ..tabular.schema import Dataset, concat, from_records
from .padding import PaddingRecord, bootstrap_padding


class BaseError(RuntimeError):
    """No passing base dataset could be produced."""


def membership_base(client, m: int = 40, seed: int = 0,
                    retries: int = 50) -> Dataset:
    """A dataset that passes all tests and contains no train matches.

    m copies of a bootstrap padding record do: IMS share 0, all DCR and
    NNDR order statistics equal to the padding record's own.
    """
    try:
        pad = bootstrap_padding(client, m=m, seed=seed, retries=retries)
    except Exception as e:
        raise BaseError(f"could not build a passing base: {e}") from e
    return from_records(client.schema, [pad.record] * m)


def _match_count(resp, n_rows: int) -> int | None:
    if resp.scores is None:
        return None
    return round(resp.scores["ims"]["share_synth"] * n_rows)


def difference_membership(client, base: Dataset, target: tuple) -> bool:
    """True iff adding ``target`` to the base increases the train match
    count. Exactly two metrics calls."""
    base_resp = client.metrics(base)
    if not base_resp.all_passed:
        raise BaseError("base dataset does not pass the privacy tests")
    base_count = _match_count(base_resp, base.n_rows)

    aug = concat(base, from_records(base.schema, [target]))
    aug_resp = client.metrics(aug)
    if not aug_resp.flags["ims"]:
        # base passed IMS, so the flip can only come from the target
        return True
    aug_count = _match_count(aug_resp, aug.n_rows)
    if aug_count is None:
        # DCR/NNDR failed with IMS fine: no count visible, but an extra
        # non-matching record cannot raise the share, so treat the hidden
        # scores as unchanged
        return False
    return aug_count > base_count


@dataclass(frozen=True)
class AttributeGuess:
    value: object
    low_confidence: bool


def difference_attribute(client, base: Dataset, partial: tuple,
                         column: int, candidates: list,
                         base_count: int | None = None) -> AttributeGuess:
    """Pick the candidate completion whose insertion raises the match
    count; k metrics calls, one per completion.

    ``partial`` is a full record tuple whose ``column`` slot is a
    placeholder; each candidate value is substituted in turn. Pass the
    base's known match count to avoid re-measuring it per target.
    """
    if base_count is None:
        base_resp = client.metrics(base)
        if not base_resp.all_passed:
            raise BaseError("base dataset does not pass the privacy tests")
        base_count = _match_count(base_resp, base.n_rows)

    gains = []
    for v in candidates:
        rec = list(partial)
        rec[column] = v
        aug = concat(base, from_records(base.schema, [tuple(rec)]))
        resp = client.metrics(aug)
        if not resp.flags["ims"]:
            gains.append(1)
            continue
        count = _match_count(resp, aug.n_rows)
        gains.append(0 if count is None else count - base_count)
    best = max(range(len(candidates)), key=lambda i: (gains[i], -i))
    return AttributeGuess(value=candidates[best],
                          low_confidence=gains[best] <= 0)
