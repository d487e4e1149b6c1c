import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dmiat import DiscretizationScheme, apply_scheme, equal_frequency, equal_width, iem_mdl
from dmiat.discretizers import MISSING_ID, dump_schemes, fit_scheme, fit_schemes, load_schemes, mdl_accepts
from dmiat.errors import ConfigurationError, SchemaError
from oracles import iem_oracle, make_dataset


def test_equal_width():
    v = np.linspace(0, 10, 11)
    assert equal_width(v, 5).cut_points == (2, 4, 6, 8)
    assert equal_width(v, 2).cut_points == (5,)
    assert equal_width([3.3] * 7, 4).cut_points == ()
    with pytest.raises(ConfigurationError):
        equal_width(v, 1)


def test_equal_frequency():
    v = np.arange(1.0, 11.0)
    assert equal_frequency(v, 2).cut_points == (5.5,)
    assert equal_frequency([1, 1, 1, 1, 2], 2).cut_points == (1.5,)
    assert equal_frequency([3.3] * 7, 4).cut_points == ()


def test_equal_frequency_populations():
    v = np.random.default_rng(0).random(100)
    s = equal_frequency(v, 5)
    assert len(s.cut_points) == 4
    pops = np.bincount(np.searchsorted(s.cut_points, v, side="left"), minlength=5)
    assert all(19 <= p <= 21 for p in pops)


def test_iem_basic():
    assert iem_mdl(np.arange(30.0), np.zeros(30, int)).cut_points == ()
    v = np.arange(40.0)
    assert iem_mdl(v, (v >= 20).astype(int)).cut_points == (19.5,)
    assert iem_mdl([1.0, np.nan, 2.0], [0, 0, 1]).cut_points == iem_mdl([1.0, 2.0], [0, 1]).cut_points == (1.5,)


def test_mdl_rejects_useless_split():
    parent = np.array([10, 10])
    assert not mdl_accepts(parent, np.array([5, 5]), np.array([5, 5]))
    assert mdl_accepts(parent, np.array([10, 0]), np.array([0, 10]))


def test_iem_matches_oracle_random_columns():
    rng = np.random.default_rng(42)
    for _ in range(20):
        n = int(rng.integers(10, 101))
        k = int(rng.integers(2, 4))
        y = rng.integers(0, k, n)
        v = np.round(rng.normal(size=n) + y * rng.random() * 2, 1)
        assert iem_mdl(v, y, n_classes=k).cut_points == iem_oracle(v, y, k)


@given(st.lists(st.tuples(st.integers(0, 15), st.integers(0, 2)), min_size=2, max_size=80))
def test_iem_oracle_property(pairs):
    v = np.array([p[0] for p in pairs], float)
    y = np.array([p[1] for p in pairs])
    assert iem_mdl(v, y, n_classes=3).cut_points == iem_oracle(v, y, 3)


def test_iem_glass(glass, glass_folds):
    fe, ba, ca = (glass.attribute(n).index for n in ("Fe", "Ba", "Ca"))
    fe_empty = sum(fit_scheme("iem", glass, fe, f.train_idx).cut_points == () for f in glass_folds)
    assert fe_empty >= 8
    for f in glass_folds:
        cuts = fit_scheme("iem", glass, ba, f.train_idx).cut_points
        assert len(cuts) == 1 and 0.3 < cuts[0] < 0.45
    four = sum(fit_scheme("iem", glass, ca, f.train_idx).n_intervals == 4 for f in glass_folds)
    assert four >= 8


@given(st.lists(st.floats(-1e6, 1e6, allow_nan=False), min_size=1, max_size=60),
       st.integers(2, 12), st.sampled_from(["ew", "ef"]))
def test_unsupervised_scheme_properties(values, k, method):
    s = (equal_width if method == "ew" else equal_frequency)(values, k)
    assert len(s.cut_points) <= k - 1
    assert list(s.cut_points) == sorted(set(s.cut_points))
    ids = np.searchsorted(s.cut_points, values, side="left")
    assert ids.min() >= 0 and ids.max() <= len(s.cut_points)


def test_apply_scheme():
    ds = make_dataset([[1.0], [5.0], [9.0], [np.nan]], [0, 1, 0, 1])
    assert apply_scheme(DiscretizationScheme(0, (5.0,), "ew"), ds).tolist() == [0, 0, 1, MISSING_ID]
    assert apply_scheme(DiscretizationScheme(0, (), "ew"), ds, [0, 1, 2]).tolist() == [0, 0, 0]
    with pytest.raises(SchemaError):
        apply_scheme(DiscretizationScheme(3, (1.0,), "ew"), ds)


def test_ba_interval_assignment(glass):
    ba = glass.attribute("Ba").index
    row = int(np.flatnonzero(glass.X[:, ba] == 1.59)[0])
    assert apply_scheme(DiscretizationScheme(ba, (0.4158,), "iem"), glass, [row]).tolist() == [1]


def test_scheme_validation():
    with pytest.raises(ValueError):
        DiscretizationScheme(0, (2.0, 1.0), "ew")
    with pytest.raises(ConfigurationError):
        fit_scheme("chi2", make_dataset([[1.0], [2.0]], [0, 1]), 0, [0, 1])
    with pytest.raises(SchemaError):
        fit_scheme("ew", make_dataset([[0.0], [1.0]], [0, 1], nominal=(0,)), 0, [0, 1])


def test_scheme_io_round_trip(glass, glass_folds):
    schemes = [s for m in ("ew", "ef", "iem") for s in fit_schemes(m, glass, glass_folds[0].train_idx)]
    text = dump_schemes(schemes)
    assert load_schemes(text) == schemes
    extra = load_schemes("# external\n0\tcaim\t1.5,2.5\n1\tcaim\tAll\n")
    assert extra == [DiscretizationScheme(0, (1.5, 2.5), "caim"), DiscretizationScheme(1, (), "caim")]
    with pytest.raises(ValueError):
        load_schemes("0\tcaim\n")
    with pytest.raises(ValueError):
        load_schemes("0\tcaim\t3,1\n")


def test_fit_uses_training_rows_only():
    X = np.r_[np.arange(10.0), [1000.0]][:, None]
    ds = make_dataset(X, [0, 1] * 5 + [1])
    assert fit_scheme("ew", ds, 0, range(10), 3).cut_points == (3.0, 6.0)
