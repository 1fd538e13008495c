"""Independent reference implementations used to cross-check the package.

Everything here is written the slow, obvious way (python loops, no numpy
vectorization, no shared helpers with the package) so that agreement
between the two routes actually means something.
"""
import math


def hamming(a, b):
    return float(sum(1 for x, y in zip(a, b) if x != y))


def euclidean(a, b):
    return math.sqrt(sum((x - y) ** 2 for x, y in zip(a, b)))


def nn_two(query, reference, metric):
    """For each query row return (d1, nearest index, d2).

    Ties keep the lowest reference index. d2 can equal d1 when reference
    rows repeat.
    """
    dist = hamming if metric == "hamming" else euclidean
    out = []
    for q in query:
        ranked = sorted((dist(q, r), j) for j, r in enumerate(reference))
        d1, j1 = ranked[0]
        d2 = ranked[1][0]
        out.append((d1, j1, d2))
    return out


def percentile(values, p):
    # linear interpolation, rank = p/100 * (m - 1)
    vals = sorted(values)
    if len(vals) == 1:
        return float(vals[0])
    rank = p / 100.0 * (len(vals) - 1)
    lo = int(math.floor(rank))
    hi = min(lo + 1, len(vals) - 1)
    frac = rank - lo
    return float(vals[lo]) * (1 - frac) + float(vals[hi]) * frac


def canon(row):
    return tuple(
        round(v, 12) if isinstance(v, float) else v for v in row
    )


def ims_share(train, synth):
    keys = {canon(r) for r in train}
    hits = sum(1 for r in synth if canon(r) in keys)
    return hits / len(synth)


def _ratio(d1, d2):
    return 1.0 if d2 == 0 else d1 / d2


def report(train, test, synth, metric):
    """Full privacy report computed independently.

    Returns nested dicts with shares, 5th percentiles, means and pass flags.
    """
    share_s = ims_share(train, synth)
    share_t = ims_share(train, test)
    nn_s = nn_two(synth, train, metric)
    nn_t = nn_two(test, train, metric)
    d1_s = [t[0] for t in nn_s]
    d1_t = [t[0] for t in nn_t]
    r_s = [_ratio(d1, d2) for d1, _, d2 in nn_s]
    r_t = [_ratio(d1, d2) for d1, _, d2 in nn_t]
    rep = {
        "ims": {
            "share_synth": share_s,
            "share_test": share_t,
            "passed": share_s <= share_t,
        },
        "dcr": {
            "pct5_synth": percentile(d1_s, 5),
            "pct5_test": percentile(d1_t, 5),
            "mean_synth": sum(d1_s) / len(d1_s),
            "mean_test": sum(d1_t) / len(d1_t),
        },
        "nndr": {
            "pct5_synth": percentile(r_s, 5),
            "pct5_test": percentile(r_t, 5),
            "mean_synth": sum(r_s) / len(r_s),
            "mean_test": sum(r_t) / len(r_t),
        },
    }
    rep["dcr"]["passed"] = rep["dcr"]["pct5_synth"] >= rep["dcr"]["pct5_test"]
    rep["nndr"]["passed"] = rep["nndr"]["pct5_synth"] >= rep["nndr"]["pct5_test"]
    rep["all_passed"] = (
        rep["ims"]["passed"] and rep["dcr"]["passed"] and rep["nndr"]["passed"]
    )
    return rep


def similarity_filter(train, synth, tau, metric):
    """Indices of synth rows that survive the similarity filter."""
    d1 = [t[0] for t in nn_two(synth, train, metric)]
    return [i for i, d in enumerate(d1) if d > tau]


def outlier_filter(train, synth, pct, metric):
    """Indices of synth rows that survive the outlier filter."""
    dist = hamming if metric == "hamming" else euclidean
    loo = []
    for i, a in enumerate(train):
        loo.append(min(dist(a, b) for j, b in enumerate(train) if j != i))
    cut = percentile(loo, pct)
    d1 = [t[0] for t in nn_two(synth, train, metric)]
    return [i for i, d in enumerate(d1) if d <= cut]


def tv_distance(counts_a, counts_b):
    """Total variation distance between two count dicts."""
    keys = set(counts_a) | set(counts_b)
    na = sum(counts_a.values())
    nb = sum(counts_b.values())
    return 0.5 * sum(
        abs(counts_a.get(k, 0) / na - counts_b.get(k, 0) / nb) for k in keys
    )
