# stdlib
import itertools

# third party
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

# local
import oracles
from synthaudit.metrics import (
    ims_share,
    loo_nn_distances,
    nn_distances,
    outlier_filter,
    pct,
    privacy_report,
    similarity_filter,
)
from synthaudit.tabular import cat_column, from_records, gen_censuslite, gen_gauss, num_column, split

CAT2 = (cat_column("a", ["0", "1", "5"]), cat_column("b", ["0", "1", "5"]))


def cat_ds(rows):
    return from_records(CAT2, [tuple(str(v) for v in r) for r in rows])


def num_ds(rows, width=2):
    schema = tuple(num_column(f"x{i}") for i in range(width))
    return from_records(schema, [tuple(float(v) for v in r) for r in rows])


def test_nn_toy_example_hamming():
    reference = cat_ds([(0, 0), (0, 1), (5, 5)])
    query = cat_ds([(0, 1)])
    d1, idx, d2 = nn_distances(query, reference, "hamming")
    assert d1[0] == 0 and idx[0] == 1 and d2[0] == 1


def test_nn_tie_takes_lowest_index_and_duplicate_d2():
    reference = cat_ds([(0, 0), (0, 0), (1, 1)])
    query = cat_ds([(0, 0)])
    d1, idx, d2 = nn_distances(query, reference, "hamming")
    assert d1[0] == 0 and idx[0] == 0 and d2[0] == 0


def test_nn_requires_two_reference_rows():
    with pytest.raises(ValueError, match="at least 2"):
        nn_distances(cat_ds([(0, 0)]), cat_ds([(0, 0)]), "hamming")


def test_euclidean_rejects_categorical():
    with pytest.raises(ValueError, match="numeric"):
        nn_distances(cat_ds([(0, 0)]), cat_ds([(0, 0), (1, 1)]), "euclidean")


def test_ims_single_match():
    train = num_ds([(float(i), float(i)) for i in range(5)])
    synth = num_ds([(0.0, 0.0)] + [(50.0 + i, 0.5) for i in range(100)])
    assert ims_share(train, synth) == pytest.approx(1 / 101)


def test_ims_canonical_rounding():
    train = num_ds([(0.1, 0.2), (3.0, 4.0)])
    # differs only below the canonical precision
    synth = num_ds([(0.1 + 1e-15, 0.2)])
    assert ims_share(train, synth) == 1.0
    synth2 = num_ds([(0.1 + 1e-9, 0.2)])
    assert ims_share(train, synth2) == 0.0


def test_percentile_pins():
    assert pct(np.full(101, 7.5), 5) == 7.5
    assert pct(np.arange(100, dtype=float), 5) == pytest.approx(4.95)
    vals = np.array([3.0, 1.0, 2.0])
    assert pct(vals, 5) == pytest.approx(oracles.percentile([3, 1, 2], 5))


def test_synth_equal_test_always_passes():
    ds = gen_censuslite(600, seed=4)
    train, test = split(ds, seed=0)
    rep = privacy_report(train, test, test, "hamming")
    assert rep.ims.passed and rep.dcr.passed and rep.nndr.passed
    assert rep.all_passed


def test_synth_equal_train_fails_ims():
    ds = gen_gauss(2, 400, seed=8)
    train, test = split(ds, seed=1)
    rep = privacy_report(train, test, train, "euclidean")
    assert rep.ims.share_synth == 1.0
    assert not rep.ims.passed
    assert not rep.all_passed


def test_report_matches_oracle_hamming():
    r = np.random.default_rng(0)
    for trial in range(25):
        rows = lambda n: [
            (str(r.integers(3)), str(r.integers(3))) for _ in range(n)
        ]
        train, test, synth = rows(30), rows(20), rows(25)
        schema = (cat_column("a", ["0", "1", "2"]), cat_column("b", ["0", "1", "2"]))
        got = privacy_report(
            from_records(schema, train), from_records(schema, test),
            from_records(schema, synth), "hamming",
        )
        want = oracles.report(train, test, synth, "hamming")
        assert got.ims.share_synth == pytest.approx(want["ims"]["share_synth"])
        assert got.ims.share_test == pytest.approx(want["ims"]["share_test"])
        assert got.dcr.pct5_synth == pytest.approx(want["dcr"]["pct5_synth"])
        assert got.dcr.mean_test == pytest.approx(want["dcr"]["mean_test"])
        assert got.nndr.pct5_synth == pytest.approx(want["nndr"]["pct5_synth"])
        assert got.nndr.mean_synth == pytest.approx(want["nndr"]["mean_synth"])
        assert got.all_passed == want["all_passed"]


def test_report_matches_oracle_euclidean():
    r = np.random.default_rng(1)
    for trial in range(15):
        rows = lambda n: [tuple(map(float, r.normal(size=3))) for _ in range(n)]
        train, test, synth = rows(20), rows(15), rows(10)
        got = privacy_report(num_ds(train, 3), num_ds(test, 3),
                             num_ds(synth, 3), "euclidean")
        want = oracles.report(train, test, synth, "euclidean")
        assert got.dcr.pct5_synth == pytest.approx(want["dcr"]["pct5_synth"], abs=1e-9)
        assert got.nndr.pct5_test == pytest.approx(want["nndr"]["pct5_test"], abs=1e-9)
        assert got.dcr.mean_synth == pytest.approx(want["dcr"]["mean_synth"], abs=1e-9)


def test_nndr_bounds_and_zero_d2():
    train = num_ds([(0.0, 0.0), (0.0, 0.0), (9.0, 9.0)])
    test = num_ds([(0.1, 0.0), (5.0, 5.0)])
    synth = num_ds([(0.0, 0.0)])
    rep = privacy_report(train, test, synth, "euclidean")
    # nearest and second nearest are both the duplicated train row
    assert rep.nndr.pct5_synth == 1.0
    ds = gen_censuslite(300, seed=6)
    train, test = split(ds, seed=2)
    rep = privacy_report(train, test, test, "hamming")
    for v in (rep.nndr.pct5_synth, rep.nndr.mean_synth, rep.nndr.pct5_test):
        assert 0.0 <= v <= 1.0


def test_similarity_filter_against_oracle():
    train_rows = [(0.0, 0.0), (2.0, 2.0), (5.0, 5.0)]
    synth_rows = [(0.1, 0.0), (4.9, 5.0), (10.0, 10.0), (2.0, 2.0)]
    train, synth = num_ds(train_rows), num_ds(synth_rows)
    out = similarity_filter(train, synth, tau=0.5, metric="euclidean")
    keep = oracles.similarity_filter(train_rows, synth_rows, 0.5, "euclidean")
    assert out.records() == [synth_rows[i] for i in keep]
    # order preserved and idempotent
    again = similarity_filter(train, out, tau=0.5, metric="euclidean")
    assert again == out


def test_similarity_filter_tau_zero_drops_exact_matches_only():
    train = cat_ds([(0, 0), (1, 1)])
    synth = cat_ds([(0, 0), (0, 1), (5, 5)])
    out = similarity_filter(train, synth, tau=0.0, metric="hamming")
    assert out.records() == [("0", "1"), ("5", "5")]


def test_outlier_filter_against_oracle():
    r = np.random.default_rng(5)
    train_rows = [tuple(map(float, r.normal(size=2))) for _ in range(40)]
    synth_rows = [tuple(map(float, r.normal(size=2) * 3)) for _ in range(30)]
    train, synth = num_ds(train_rows), num_ds(synth_rows)
    out = outlier_filter(train, synth, percentile=95, metric="euclidean")
    keep = oracles.outlier_filter(train_rows, synth_rows, 95, "euclidean")
    assert out.records() == [synth_rows[i] for i in keep]
    again = outlier_filter(train, out, percentile=95, metric="euclidean")
    assert again == out


def test_loo_distance_handles_duplicates():
    ds = cat_ds([(0, 0), (0, 0), (1, 1), (5, 1)])
    loo = loo_nn_distances(ds, "hamming")
    assert loo[0] == 0 and loo[1] == 0
    assert loo[2] == 1 and loo[3] == 1


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**9), st.integers(2, 30), st.integers(1, 20), st.integers(1, 6))
def test_kernels_match_oracle(seed, n_ref, n_query, width):
    r = np.random.default_rng(seed)
    ref = [tuple(str(v) for v in r.integers(0, 3, width)) for _ in range(n_ref)]
    qry = [tuple(str(v) for v in r.integers(0, 3, width)) for _ in range(n_query)]
    schema = tuple(cat_column(f"c{i}", ["0", "1", "2"]) for i in range(width))
    d1, idx, d2 = nn_distances(
        from_records(schema, qry), from_records(schema, ref), "hamming"
    )
    want = oracles.nn_two(qry, ref, "hamming")
    for i, (w1, wi, w2) in enumerate(want):
        assert d1[i] == w1 and idx[i] == wi and d2[i] == w2
