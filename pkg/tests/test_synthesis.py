# stdlib
import math

# third party
import numpy as np
import pytest

# local
import oracles
from synthaudit.synthesis import (
    DiscretizedSampler,
    DpBudget,
    FileSampler,
    fit,
    fit_privbayes,
    marginal_diff,
    mi_diff,
    utility,
)
from synthaudit.tabular import (
    cat_column,
    fit_discretizer,
    from_records,
    gen_censuslite,
    gen_gauss,
    split,
    write_csv,
)


def column_counts(ds, c):
    vals, counts = np.unique(ds.cols[c], return_counts=True)
    return {ds.schema[c].support[v]: int(k) for v, k in zip(vals, counts)}


def test_independent_matches_marginals():
    train, _ = split(gen_censuslite(6000, seed=0), seed=1)
    model = fit("independent", train, seed=2)
    synth = model.sample(10 * train.n_rows, seed=3)
    for c in range(train.n_cols):
        tv = oracles.tv_distance(column_counts(train, c), column_counts(synth, c))
        assert tv < 0.05


def test_independent_inf_budget_equals_no_dp():
    train, _ = split(gen_censuslite(800, seed=4), seed=5)
    plain = fit("independent", train, seed=6)
    inf = fit("independent", train, dp=DpBudget(math.inf), seed=6)
    assert plain.sample(500, seed=7) == inf.sample(500, seed=7)


def test_independent_noise_degrades_marginals():
    train, _ = split(gen_censuslite(2000, seed=8), seed=9)
    gaps = {}
    for eps in (0.1, 1.0, math.inf):
        vals = []
        for s in range(20):
            model = fit("independent", train, dp=DpBudget(eps), seed=100 + s)
            synth = model.sample(train.n_rows, seed=200 + s)
            vals.append(marginal_diff(train, synth))
        gaps[eps] = float(np.mean(vals))
    assert gaps[0.1] > gaps[1.0] > gaps[math.inf]


def test_random_model_stays_in_observed_support():
    train, _ = split(gen_censuslite(400, seed=10), seed=11)
    model = fit("random", train)
    synth = model.sample(1000, seed=12)
    for c in range(train.n_cols):
        assert set(np.unique(synth.cols[c])) <= set(np.unique(train.cols[c]))
    # uniform sampling is a worse fit than the fitted marginals
    indep = fit("independent", train, seed=13).sample(1000, seed=14)
    assert marginal_diff(train, synth) > marginal_diff(train, indep)


def test_privbayes_learns_deterministic_copy():
    support = [f"v{i}" for i in range(4)]
    schema = (cat_column("a", support), cat_column("b", support),
              cat_column("c", ["x", "y"]))
    r = np.random.default_rng(0)
    rows = []
    for _ in range(1500):
        a = support[r.integers(4)]
        rows.append((a, a, "x" if r.random() < 0.5 else "y"))
    train = from_records(schema, rows)
    model = fit_privbayes(train, seed=1)
    synth = model.sample(3000, seed=2)
    agree = np.mean(synth.cols[0] == synth.cols[1])
    assert agree >= 0.99


def test_privbayes_rejects_continuous():
    with pytest.raises(ValueError, match="categorical"):
        fit("privbayes_lite", gen_gauss(2, 50, seed=0))


def test_privbayes_inf_is_deterministic():
    train, _ = split(gen_censuslite(600, seed=15), seed=16)
    a = fit_privbayes(train, dp=DpBudget(math.inf), seed=3)
    b = fit_privbayes(train, seed=3)
    assert a.order == b.order and a.parents == b.parents
    assert a.sample(300, seed=4) == b.sample(300, seed=4)


def test_privbayes_parent_cap_shrinks_with_eps():
    train, _ = split(gen_censuslite(6000, seed=17), seed=18)
    inf_model = fit_privbayes(train, seed=5)
    assert max(len(p) for p in inf_model.parents) == 2
    low = fit_privbayes(train, dp=DpBudget(0.1), seed=5)
    assert max(len(p) for p in low.parents) == 0
    mid = fit_privbayes(train, dp=DpBudget(1.0), seed=5)
    assert max(len(p) for p in mid.parents) == 1


def test_oracle_model_tail_mass():
    model = fit("oracle", gen_gauss(2, 100, seed=19))
    synth = model.sample(10_000, seed=20)
    pts = np.stack(synth.cols, axis=1)
    frac = float(np.mean(np.linalg.norm(pts, axis=1) > 2.15))
    assert abs(frac - math.exp(-2.15 ** 2 / 2)) < 0.01


def test_utility_bounds_and_perfect_copy():
    train, _ = split(gen_censuslite(1000, seed=21), seed=22)
    score = utility(train, train)
    assert score.marginal_diff == 0.0 and score.mi_diff == 0.0
    other = fit("random", train).sample(1000, seed=23)
    score2 = utility(train, other)
    assert 0.0 <= score2.marginal_diff <= 1.0
    assert 0.0 <= score2.mi_diff <= 1.0


def test_mi_diff_zero_entropy_pair_is_silent():
    schema = (cat_column("a", ["x"]), cat_column("b", ["p", "q"]))
    train = from_records(schema, [("x", "p"), ("x", "q")] * 10)
    synth = from_records(schema, [("x", "p")] * 20)
    assert mi_diff(train, synth) == 0.0


def test_dp_budget_validation():
    with pytest.raises(ValueError):
        DpBudget(0.0)
    with pytest.raises(ValueError):
        DpBudget(-1.0)
    assert DpBudget(1.0).resolved(200).delta == pytest.approx(1 / 200)
    assert DpBudget(1.0, 1e-6).resolved(200).delta == 1e-6


def test_file_sampler_round_robin(tmp_path):
    a = gen_censuslite(20, seed=24)
    b = gen_censuslite(20, seed=25)
    write_csv(a, tmp_path / "a.csv")
    write_csv(b, tmp_path / "b.csv")
    sampler = FileSampler(tmp_path)
    s1 = sampler.sample(20)
    s2 = sampler.sample(20)
    s3 = sampler.sample(20)
    assert s1.records() == a.records()
    assert s2.records() == b.records()
    assert s3.records() == a.records()
    assert sampler.sample(5).n_rows == 5


def test_discretized_sampler_labels():
    base = fit("oracle", gen_gauss(2, 500, seed=26))
    disc = fit_discretizer(gen_gauss(2, 500, seed=26), "uniform", n_bins=10)
    wrapped = DiscretizedSampler(base, disc)
    out = wrapped.sample(200, seed=27)
    assert all(c.kind == "cat" for c in out.schema)
    labels = set(disc.labels())
    for i in range(0, 200, 50):
        assert set(out.record(i)) <= labels
