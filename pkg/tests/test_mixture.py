# third party
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

# local
from synthaudit import mixture
from synthaudit.tabular import cat_column, from_records, gen_gauss


def two_blobs(n=200, seed=0):
    r = np.random.default_rng(seed)
    a = r.normal([0.0, 0.0], 0.3, size=(n, 2))
    b = r.normal([6.0, 6.0], 0.3, size=(n, 2))
    return np.concatenate([a, b]), np.array([0] * n + [1] * n)


def test_recovers_separated_blobs():
    X, truth = two_blobs()
    model = mixture.fit_gmm(X, k=2, seed=5)
    assign = mixture.predict(model, X)
    # label permutation is arbitrary
    agree = max(np.mean(assign == truth), np.mean(assign == 1 - truth))
    assert agree > 0.99
    centers = sorted(model.means.tolist())
    assert np.allclose(centers[0], [0.0, 0.0], atol=0.2)
    assert np.allclose(centers[1], [6.0, 6.0], atol=0.2)


def test_loglik_monotone_and_responsibilities_normalized():
    X, _ = two_blobs(seed=3)
    model = mixture.fit_gmm(X, k=4, seed=1)
    ll = np.array(model.ll_history)
    assert np.all(np.diff(ll) >= -1e-8 * np.maximum(1.0, np.abs(ll[:-1])))
    resp = mixture.responsibilities(model, X)
    assert np.allclose(resp.sum(axis=1), 1.0, atol=1e-9)
    assert np.all(model.variances >= model.floor)


def test_more_components_than_points_is_tolerated():
    X = np.array([[0.0, 0.0], [1.0, 1.0], [0.5, 0.0], [3.0, 2.0], [2.0, 2.0]])
    model = mixture.fit_gmm(X, k=8, seed=2)
    assert np.isfinite(model.ll_history[-1])
    assign = mixture.predict(model, X)
    assert assign.shape == (5,)


def test_encodings_on_categorical_data():
    schema = (cat_column("b", [f"b{i}" for i in range(4)]),
              cat_column("c", ["x", "y"]))
    rows = [("b0", "x")] * 30 + [("b3", "y")] * 30
    ds = from_records(schema, rows)
    onehot = mixture.fit_gmm(ds, k=2, seed=0, encoding="onehot")
    assert onehot.means.shape[1] == 6
    ordin = mixture.fit_gmm(ds, k=2, seed=0, encoding="ordinal")
    assert ordin.means.shape[1] == 2
    a = mixture.predict(ordin, ds)
    assert len(set(a[:30])) == 1 and len(set(a[30:])) == 1 and a[0] != a[-1]


def test_smallest_clusters_greedy():
    sizes = [500, 300, 120, 80]
    assign = np.repeat(np.arange(4), sizes)
    assert mixture.smallest_clusters(4, assign, budget=200) == [2, 3]
    assert mixture.smallest_clusters(4, assign, budget=80) == [3]
    assert mixture.smallest_clusters(4, assign, budget=79) == []
    assert mixture.smallest_clusters(4, assign, budget=10_000) == [0, 1, 2, 3]


def test_smallest_clusters_tie_prefers_lower_id():
    assign = np.repeat(np.arange(3), [100, 100, 50])
    assert mixture.smallest_clusters(3, assign, budget=150) == [0, 2]


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000), st.integers(1, 5), st.integers(5, 40))
def test_random_fits_stay_monotone(seed, k, n):
    r = np.random.default_rng(seed)
    X = r.normal(size=(n, 2)) * r.uniform(0.1, 3.0)
    model = mixture.fit_gmm(X, k=k, seed=seed)
    ll = np.array(model.ll_history)
    assert np.all(np.diff(ll) >= -1e-8 * np.maximum(1.0, np.abs(ll[:-1])))
    resp = mixture.responsibilities(model, X)
    assert np.allclose(resp.sum(axis=1), 1.0, atol=1e-9)


def test_fit_on_gauss_dataset():
    ds = gen_gauss(2, 300, seed=9)
    model = mixture.fit_gmm(ds, k=3, seed=4)
    assign = mixture.predict(model, ds)
    assert assign.shape == (300,)
    assert sorted(set(assign)) == sorted(set(range(model.k)) & set(assign))
