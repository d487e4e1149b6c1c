"""Naive Bayes, 3-NN and softmax regression with fixed hyperparameters."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .data import Dataset
from .errors import ConfigurationError, SchemaError, UndefinedAccuracyError

VAR_FLOOR = 1e-9
LAPLACE = 1.0
KNN_K = 3
LR_ITERATIONS = 500
LR_STEP = 0.1
LR_L2 = 1e-4


@dataclass(frozen=True)
class AccuracyRecord:
    dataset: str
    variant: str
    classifier: str
    fold: int
    accuracy: float


class _Encoder:
    """Min-max scaled continuous columns plus one-hot nominal columns.

    Constant continuous columns are dropped.  A missing continuous value is
    replaced by the scaled training mean; a missing or never-seen nominal
    symbol encodes as all zeros.
    """

    def __init__(self, ds: Dataset):
        self.plan = []
        for a in ds.attributes:
            col = ds.X[:, a.index]
            known = col[~np.isnan(col)]
            if a.is_continuous:
                if known.size == 0 or known.min() == known.max():
                    continue
                lo, hi = float(known.min()), float(known.max())
                self.plan.append((a.index, "num", (lo, hi - lo, (float(known.mean()) - lo) / (hi - lo))))
            else:
                seen = np.unique(known).astype(np.int64)
                if seen.size:
                    self.plan.append((a.index, "cat", seen))
        self.width = sum(1 if kind == "num" else len(p) for _, kind, p in self.plan)

    def transform(self, ds: Dataset) -> np.ndarray:
        out = np.zeros((ds.n_rows, self.width))
        c = 0
        for j, kind, p in self.plan:
            col = ds.X[:, j]
            if kind == "num":
                lo, span, fill = p
                z = (col - lo) / span
                z[np.isnan(col)] = fill
                out[:, c] = z
                c += 1
            else:
                for s in p:
                    out[:, c] = col == s
                    c += 1
        return out


@dataclass
class Model:
    kind: str
    class_domain: tuple
    attributes: tuple
    seen: np.ndarray
    trivial: bool = False

    def _check(self, ds: Dataset):
        if ds.attributes != self.attributes or ds.class_domain != self.class_domain:
            raise SchemaError("dataset schema differs from the training schema")

    def predict(self, ds: Dataset) -> np.ndarray:
        """Predicted class codes for every row of ``ds``."""
        self._check(ds)
        if self.trivial:
            return np.full(ds.n_rows, self.seen[0], dtype=np.int64)
        return self._predict(ds)

    def predict_labels(self, ds: Dataset) -> list:
        return [self.class_domain[c] for c in self.predict(ds)]

    def _predict(self, ds):
        raise NotImplementedError

    def params(self) -> dict:
        return {"seen": self.seen}


@dataclass
class NaiveBayes(Model):
    log_prior: np.ndarray = None
    gauss: dict = field(default_factory=dict)  # attr -> (means, vars) per class
    tables: dict = field(default_factory=dict)  # attr -> log P(symbol | class), shape (classes, symbols)
    symbol_seen: dict = field(default_factory=dict)

    def log_scores(self, ds: Dataset) -> np.ndarray:
        """Unnormalised log joint per row and class; unseen classes get -inf."""
        self._check(ds)
        s = np.tile(self.log_prior, (ds.n_rows, 1))
        for j, (mu, var) in self.gauss.items():
            x = ds.X[:, j][:, None]
            term = -0.5 * (np.log(2 * np.pi * var)[None, :] + (x - mu[None, :]) ** 2 / var[None, :])
            s += np.where(np.isnan(x), 0.0, term)
        for j, table in self.tables.items():
            x = ds.X[:, j]
            ok = ~np.isnan(x)
            codes = np.where(ok, x, 0).astype(np.int64)
            ok &= self.symbol_seen[j][codes]
            s += np.where(ok[:, None], table[:, codes].T, 0.0)
        return s

    def posterior(self, ds: Dataset) -> np.ndarray:
        s = self.log_scores(ds)
        s = s - s.max(axis=1, keepdims=True)
        p = np.exp(s)
        return p / p.sum(axis=1, keepdims=True)

    def _predict(self, ds):
        return np.argmax(self.log_scores(ds), axis=1)

    def params(self):
        out = {"seen": self.seen, "log_prior": self.log_prior}
        for j, (mu, var) in self.gauss.items():
            out[f"mu{j}"], out[f"var{j}"] = mu, var
        for j, t in self.tables.items():
            out[f"table{j}"] = t
        return out


@dataclass
class KNearest(Model):
    encoder: _Encoder = None
    train_Z: np.ndarray = None
    train_y: np.ndarray = None
    k: int = KNN_K

    def _predict(self, ds):
        Z = np.ascontiguousarray(self.encoder.transform(ds))
        return _kernels.knn_predict(self.train_Z, self.train_y, Z, self.k, len(self.class_domain))

    def params(self):
        return {"seen": self.seen, "train_Z": self.train_Z, "train_y": self.train_y}


@dataclass
class Logistic(Model):
    encoder: _Encoder = None
    weights: np.ndarray = None  # (features + bias, seen classes)
    losses: list = field(default_factory=list)

    def scores(self, ds: Dataset) -> np.ndarray:
        self._check(ds)
        Z = self.encoder.transform(ds)
        Z = np.hstack([Z, np.ones((Z.shape[0], 1))])
        return Z @ self.weights

    def _predict(self, ds):
        return self.seen[np.argmax(self.scores(ds), axis=1)]

    def params(self):
        return {"seen": self.seen, "weights": self.weights}


def _softmax(a):
    a = a - a.max(axis=1, keepdims=True)
    e = np.exp(a)
    return e / e.sum(axis=1, keepdims=True)


def _train_nb(ds, seen, counts):
    n = ds.n_rows
    log_prior = np.full(len(ds.class_domain), -np.inf)
    log_prior[seen] = np.log(counts[seen] / n)
    m = NaiveBayes("nb", ds.class_domain, ds.attributes, seen, log_prior=log_prior)
    for a in ds.attributes:
        col = ds.X[:, a.index]
        known = ~np.isnan(col)
        if a.is_continuous:
            mu = np.zeros(len(ds.class_domain))
            var = np.ones(len(ds.class_domain))
            all_known = col[known]
            for c in seen:
                v = col[known & (ds.y == c)]
                if v.size == 0:
                    v = all_known if all_known.size else np.zeros(1)
                mu[c] = v.mean()
                var[c] = max(v.var(), VAR_FLOOR)
            m.gauss[a.index] = (mu, var)
        else:
            n_sym = max(len(a.symbols), 1)
            freq = np.zeros((len(ds.class_domain), n_sym))
            codes = col[known].astype(np.int64)
            np.add.at(freq, (ds.y[known], codes), 1)
            denom = freq.sum(axis=1, keepdims=True) + LAPLACE * n_sym
            m.tables[a.index] = np.log((freq + LAPLACE) / denom)
            m.symbol_seen[a.index] = freq.sum(axis=0) > 0
    return m


def _train_knn(ds, seen, counts):
    enc = _Encoder(ds)
    return KNearest("knn3", ds.class_domain, ds.attributes, seen, encoder=enc,
                    train_Z=np.ascontiguousarray(enc.transform(ds)), train_y=ds.y.copy())


def _train_logistic(ds, seen, counts, iterations=LR_ITERATIONS, step=LR_STEP, l2=LR_L2):
    enc = _Encoder(ds)
    Z = np.hstack([enc.transform(ds), np.ones((ds.n_rows, 1))])
    col = {c: i for i, c in enumerate(seen)}
    Y = np.zeros((ds.n_rows, seen.size))
    Y[np.arange(ds.n_rows), [col[c] for c in ds.y]] = 1
    W = np.zeros((Z.shape[1], seen.size))
    reg = np.ones((Z.shape[1], 1))
    reg[-1] = 0  # bias is not penalised
    n = ds.n_rows

    def loss(W):
        A = Z @ W
        A = A - A.max(axis=1, keepdims=True)
        lse = np.log(np.exp(A).sum(axis=1))
        return float(np.mean(lse - (A * Y).sum(axis=1)) + 0.5 * l2 * np.sum(reg * W * W))

    losses = [loss(W)]
    for _ in range(iterations):
        P = _softmax(Z @ W)
        W = W - step * (Z.T @ (P - Y) / n + l2 * reg * W)
        losses.append(loss(W))
    return Logistic("logistic", ds.class_domain, ds.attributes, seen, encoder=enc, weights=W, losses=losses)


_TRAINERS = {"nb": _train_nb, "knn3": _train_knn, "logistic": _train_logistic}
ALIASES = {"naive_bayes": "nb", "knn": "knn3", "nb": "nb", "knn3": "knn3", "logistic": "logistic"}
CLASSIFIERS = tuple(_TRAINERS)


def canonical(kind: str) -> str:
    try:
        return ALIASES[kind]
    except KeyError:
        raise ConfigurationError(f"unknown classifier {kind!r}; choose from {CLASSIFIERS}") from None


def train(kind: str, ds: Dataset, **options) -> Model:
    """Fit a classifier; a one-class training set gives a constant model."""
    kind = canonical(kind)
    if ds.n_rows == 0:
        raise ValueError("cannot train on an empty dataset")
    counts = np.bincount(ds.y, minlength=len(ds.class_domain))
    seen = np.flatnonzero(counts)
    if seen.size == 1:
        cls = {"nb": NaiveBayes, "knn3": KNearest, "logistic": Logistic}[kind]
        return cls(kind, ds.class_domain, ds.attributes, seen, trivial=True)
    return _TRAINERS[kind](ds, seen, counts, **options)


def predict(model: Model, row) -> str:
    """Class symbol for a single coded row (values as stored in ``Dataset.X``)."""
    row = np.asarray(row, dtype=np.float64).reshape(1, -1)
    if row.shape[1] != len(model.attributes):
        raise SchemaError(f"row has {row.shape[1]} values, model expects {len(model.attributes)}")
    ds = Dataset(model.attributes, row, np.zeros(1, dtype=np.int64), model.class_domain)
    return model.class_domain[int(model.predict(ds)[0])]


def accuracy(model: Model, test: Dataset) -> float:
    if test.n_rows == 0:
        raise UndefinedAccuracyError("accuracy of an empty test fold is undefined")
    return float(np.mean(model.predict(test) == test.y))


def evaluate(kind: str, train_ds: Dataset, test_ds: Dataset, dataset: str = "", variant: str = "",
             fold: int = 0) -> AccuracyRecord:
    if not train_ds.same_schema(test_ds):
        raise SchemaError("train and test schemas differ")
    if test_ds.n_rows == 0:
        raise UndefinedAccuracyError("accuracy of an empty test fold is undefined")
    model = train(kind, train_ds)
    return AccuracyRecord(dataset or train_ds.name, variant, canonical(kind), fold, accuracy(model, test_ds))
