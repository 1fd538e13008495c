# stdlib
import math

# third party
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

# local
from synthaudit.tabular import (
    CAT,
    NUM,
    Column,
    CsvFormatError,
    DesignatedClass,
    Radius,
    SchemaError,
    apply_discretizer,
    cat_column,
    fit_discretizer,
    from_records,
    gen_censuslite,
    gen_gauss,
    label_outliers,
    num_column,
    read_csv,
    split,
    write_csv,
)

CENSUS_CARDS = (10, 4, 4, 4, 2, 2)


def test_gen_gauss_moments():
    ds = gen_gauss(2, 2000, seed=7)
    pts = np.stack(ds.cols, axis=1)
    assert pts.shape == (2000, 2)
    assert np.all(np.abs(pts.mean(axis=0)) < 0.1)
    assert np.all(np.abs(pts.std(axis=0) - 1.0) < 0.1)


def test_gen_gauss_deterministic():
    assert gen_gauss(3, 50, seed=1) == gen_gauss(3, 50, seed=1)
    assert gen_gauss(3, 50, seed=1) != gen_gauss(3, 50, seed=2)


def test_dataset_arrays_immutable():
    ds = gen_gauss(2, 10, seed=0)
    with pytest.raises(ValueError):
        ds.cols[0][0] = 99.0


def test_censuslite_schema_and_coverage():
    ds = gen_censuslite(6000, seed=3)
    cards = tuple(len(c.support) for c in ds.schema)
    assert cards == CENSUS_CARDS
    assert ds.n_rows == 6000
    full = math.prod(CENSUS_CARDS)
    distinct = len({ds.record(i) for i in range(ds.n_rows)})
    assert distinct < 0.30 * full
    assert gen_censuslite(100, seed=5) == gen_censuslite(100, seed=5)


def test_split_is_a_partition():
    ds = gen_censuslite(400, seed=11)
    train, test = split(ds, seed=9)
    assert train.n_rows == 200 and test.n_rows == 200
    whole = sorted(ds.records())
    halves = sorted(train.records() + test.records())
    assert whole == halves
    train2, test2 = split(ds, seed=9)
    assert train == train2 and test == test2


def test_radius_outliers_fraction():
    ds = gen_gauss(2, 2000, seed=21)
    out = label_outliers(ds, Radius(2.15))
    frac = len(out) / 2000
    assert abs(frac - math.exp(-2.15 ** 2 / 2)) < 0.02
    pts = np.stack(ds.cols, axis=1)
    norms = np.linalg.norm(pts, axis=1)
    assert np.all(norms[out] > 2.15)
    inliers = np.setdiff1d(np.arange(2000), out)
    assert np.all(norms[inliers] <= 2.15)


def test_designated_class_outliers():
    ds = gen_censuslite(500, seed=2)
    out = label_outliers(ds, DesignatedClass("region", "r6"))
    codes = ds.cols[0]
    assert np.array_equal(out, np.flatnonzero(codes == 6))


def test_uniform_discretizer_edges_and_clipping():
    schema = (num_column("x", -100, 100),)
    ds = from_records(schema, [(float(v),) for v in range(11)])
    disc = fit_discretizer(ds, "uniform", n_bins=5)
    e = disc.edges["x"]
    assert np.allclose(np.diff(e), 2.0)
    applied = apply_discretizer(disc, ds)
    assert applied.schema[0].kind == CAT
    assert applied.schema[0].support == tuple(f"b{i}" for i in range(5))
    # interior edge value falls to the lower bin, max to the last bin
    probe = from_records(schema, [(2.0,), (2.1,), (10.0,), (-50.0,), (50.0,)])
    got = [apply_discretizer(disc, probe).record(i)[0] for i in range(5)]
    assert got == ["b0", "b1", "b4", "b0", "b4"]


def test_quantile_discretizer_balanced_counts():
    vals = [(float(v),) for v in range(100)]
    ds = from_records((num_column("x", -1e6, 1e6),), vals)
    disc = fit_discretizer(ds, "quantile", n_bins=4)
    out = apply_discretizer(disc, ds)
    counts = np.bincount(out.cols[0], minlength=4)
    assert counts.tolist() == [25, 25, 25, 25]


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(-1e6, 1e6, allow_nan=False), min_size=2, max_size=60),
       st.integers(2, 8))
def test_discretizer_order_preserving(values, n_bins):
    if max(values) == min(values):
        return
    ds = from_records((num_column("x", -1e7, 1e7),), [(v,) for v in values])
    disc = fit_discretizer(ds, "uniform", n_bins=n_bins)
    out = apply_discretizer(disc, ds)
    codes = out.cols[0]
    order = np.argsort(np.array(values), kind="stable")
    assert np.all(np.diff(codes[order]) >= 0)
    assert codes.min() >= 0 and codes.max() < n_bins


def test_csv_round_trip(tmp_path):
    ds = gen_censuslite(50, seed=1)
    p = tmp_path / "census.csv"
    write_csv(ds, p)
    back = read_csv(p)
    assert back.records() == ds.records()
    assert [c.name for c in back.schema] == [c.name for c in ds.schema]
    assert [c.kind for c in back.schema] == [c.kind for c in ds.schema]

    gds = gen_gauss(3, 40, seed=4)
    p2 = tmp_path / "gauss.csv"
    write_csv(gds, p2)
    back2 = read_csv(p2)
    assert back2.records() == gds.records()


def test_csv_errors_name_line_and_column(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("a:num,b:cat\n1.5,x\noops,y\n")
    with pytest.raises(CsvFormatError) as err:
        read_csv(p)
    assert "line 3" in str(err.value) and "'a'" in str(err.value)

    p.write_text("a:num,b:cat\n1.5\n")
    with pytest.raises(CsvFormatError) as err:
        read_csv(p)
    assert "line 2" in str(err.value)

    p.write_text("a:widget\n1\n")
    with pytest.raises(CsvFormatError) as err:
        read_csv(p)
    assert "line 1" in str(err.value)


def test_schema_validation_errors():
    with pytest.raises(SchemaError):
        Column("x", "str")
    with pytest.raises(SchemaError):
        num_column("x", 5, 5)
    schema = (cat_column("c", ["a", "b"]), num_column("x", 0, 1))
    with pytest.raises(SchemaError, match="not in support"):
        from_records(schema, [("z", 0.5)])
    with pytest.raises(SchemaError, match="outside"):
        from_records(schema, [("a", 2.0)])
    with pytest.raises(SchemaError, match="row 0"):
        from_records(schema, [("a",)])
