import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dmiat.classify import (AccuracyRecord, accuracy, canonical, evaluate, predict, train)
from dmiat.errors import ConfigurationError, SchemaError, UndefinedAccuracyError
from oracles import make_dataset


def binary_table():
    x = [1] * 9 + [0] * 1 + [1] * 1 + [0] * 9
    y = [0] * 10 + [1] * 10
    return make_dataset(np.array(x, float)[:, None], y, nominal=(0,))


def test_nb_hand_example():
    ds = binary_table()
    m = train("nb", ds)
    assert predict(m, [1]) == "c0"
    assert predict(m, [0]) == "c1"
    post = m.posterior(ds.subset([0]))
    assert post[0, 0] == pytest.approx(10 / 12)


def test_nb_gaussian_and_missing():
    X = np.array([[0.0], [0.2], [5.0], [5.2]])
    ds = make_dataset(X, [0, 0, 1, 1])
    m = train("nb", ds)
    mu, var = m.gauss[0]
    assert mu.tolist() == [0.1, 5.1] and var == pytest.approx([0.01, 0.01])
    assert predict(m, [4.0]) == "c1"
    # missing value: prior decides, equal priors -> first class
    assert predict(m, [np.nan]) == "c0"
    const = make_dataset([[1.0], [1.0], [2.0], [2.0]], [0, 0, 1, 1])
    assert train("nb", const).gauss[0][1].tolist() == [1e-9, 1e-9]


@pytest.mark.parametrize("kind", ["nb", "knn3", "logistic"])
def test_posterior_and_labels(kind, iris):
    m = train(kind, iris)
    pred = m.predict(iris)
    assert pred.shape == (150,) and set(pred) <= {0, 1, 2}
    assert accuracy(m, iris) > 0.8
    if kind == "nb":
        assert np.allclose(m.posterior(iris).sum(axis=1), 1)


def test_knn_exact_match():
    X = np.array([[1.0, 1.0]] * 3 + [[0.0, 0.0], [5.0, 5.0], [4.0, 1.0]])
    ds = make_dataset(X, [1, 1, 1, 0, 0, 0])
    assert predict(train("knn", ds), [1.0, 1.0]) == "c1"


def test_single_class_training():
    ds = make_dataset([[1.0], [2.0], [3.0]], [1, 1, 1], n_classes=2)
    for kind in ("nb", "knn3", "logistic"):
        m = train(kind, ds)
        assert m.trivial and predict(m, [100.0]) == "c1"


def test_logistic_training_curve():
    rng = np.random.default_rng(0)
    X = rng.normal(size=(80, 3))
    y = (X[:, 0] + 0.5 * X[:, 1] > 0).astype(int)
    ds = make_dataset(X, y)
    m0 = train("logistic", ds, iterations=0)
    assert not m0.weights.any() and m0.losses == [pytest.approx(np.log(2))]
    m = train("logistic", ds)
    assert len(m.losses) == 501
    assert all(b <= a + 1e-12 for a, b in zip(m.losses, m.losses[1:]))


@pytest.mark.parametrize("kind", ["nb", "knn3", "logistic"])
def test_label_permutation_equivariance(kind, iris):
    perm = np.array([2, 0, 1])
    swapped = type(iris)(iris.attributes, iris.X, perm[iris.y],
                         tuple(iris.class_domain[i] for i in np.argsort(perm)), iris.name)
    a = train(kind, iris).predict_labels(iris)
    b = train(kind, swapped).predict_labels(swapped)
    agree = np.mean([x == y for x, y in zip(a, b)])
    assert agree >= 0.98


@pytest.mark.parametrize("kind", ["knn3", "logistic"])
def test_constant_column_is_ignored(kind, iris):
    X = np.column_stack([iris.X, np.full(150, 7.0)])
    from dmiat import Attribute
    attrs = iris.attributes + (Attribute("const", "continuous", 4),)
    wide = type(iris)(attrs, X, iris.y, iris.class_domain)
    assert np.array_equal(train(kind, iris).predict(iris), train(kind, wide).predict(wide))


def test_unseen_symbol_and_schema_checks():
    ds = binary_table()
    m = train("nb", ds)
    other = make_dataset([[0.0, 1.0], [1.0, 1.0]], [0, 1])
    with pytest.raises(SchemaError):
        m.predict(other)
    with pytest.raises(SchemaError):
        predict(m, [1, 2])
    with pytest.raises(UndefinedAccuracyError):
        evaluate("nb", ds, ds.subset([]))
    with pytest.raises(ConfigurationError):
        canonical("svm")


def test_evaluate_record(iris):
    rec = evaluate("naive_bayes", iris.subset(range(0, 150, 2)), iris.subset(range(1, 150, 2)), "iris", "A", 3)
    assert isinstance(rec, AccuracyRecord)
    assert (rec.dataset, rec.variant, rec.classifier, rec.fold) == ("iris", "A", "nb", 3)
    assert 0.9 <= rec.accuracy <= 1


@given(st.lists(st.floats(-5, 5, allow_nan=False), min_size=4, max_size=30), st.floats(0.5, 10), st.floats(-3, 3))
def test_knn_affine_invariance(xs, scale, shift):
    y = [i % 2 for i in range(len(xs))]
    a = make_dataset(np.array(xs)[:, None], y)
    b = make_dataset(np.array(xs)[:, None] * scale + shift, y)
    if np.ptp(xs) == 0:
        return
    za = train("knn3", a).train_Z
    zb = train("knn3", b).train_Z
    assert np.allclose(za, zb, atol=1e-9)
