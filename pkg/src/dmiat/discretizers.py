"""Equal-width, equal-frequency and entropy/MDL (Fayyad-Irani) discretizers.

A scheme with cut points ``d1 < ... < dk`` maps a value to interval id
``i`` such that ``d_i < v <= d_{i+1}``, with the first interval closed on
both sides.  An empty scheme is the single interval "All".
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _kernels
from .data import Dataset
from .errors import ConfigurationError, SchemaError

MISSING_ID = -1
METHODS = ("ew", "ef", "iem")


@dataclass(frozen=True)
class DiscretizationScheme:
    attr: int
    cut_points: tuple[float, ...]
    method: str

    def __post_init__(self):
        cuts = tuple(float(c) for c in self.cut_points)
        if any(not b > a for a, b in zip(cuts, cuts[1:])):
            raise ValueError("cut points must be strictly increasing")
        object.__setattr__(self, "cut_points", cuts)

    @property
    def n_intervals(self) -> int:
        return len(self.cut_points) + 1


def _clean(values):
    v = np.asarray(values, dtype=np.float64)
    return v[~np.isnan(v)]


def equal_width(values, k: int = 10, attr: int = -1) -> DiscretizationScheme:
    if k < 2:
        raise ConfigurationError("need at least two intervals")
    v = _clean(values)
    if v.size == 0 or v.min() == v.max():
        return DiscretizationScheme(attr, (), "ew")
    lo, hi = float(v.min()), float(v.max())
    cuts = sorted({lo + i * (hi - lo) / k for i in range(1, k)})
    return DiscretizationScheme(attr, tuple(c for c in cuts if lo <= c < hi), "ew")


def equal_frequency(values, k: int = 10, attr: int = -1) -> DiscretizationScheme:
    """Cuts at the legal boundary nearest each rank ``n*i/k``.

    A legal boundary sits between two adjacent distinct sorted values, so
    a run of ties is never split; a rank inside a run moves to whichever run
    edge is closer (the lower one on a tie).
    """
    if k < 2:
        raise ConfigurationError("need at least two intervals")
    v = np.sort(_clean(values))
    n = v.size
    if n == 0 or v[0] == v[-1]:
        return DiscretizationScheme(attr, (), "ef")
    # q rows fall below a boundary at position q
    legal = np.flatnonzero(v[:-1] < v[1:]) + 1
    cuts = set()
    for i in range(1, k):
        rank = n * i / k
        q = legal[np.argmin(np.abs(legal - rank))]
        cuts.add((v[q - 1] + v[q]) / 2)
    return DiscretizationScheme(attr, tuple(sorted(cuts)), "ef")


def _entropy(counts) -> float:
    total = counts.sum()
    h = 0.0
    for n in counts:
        if n > 0:
            p = int(n) / total
            h += -(p * math.log2(p))
    return h


def mdl_accepts(parent, left, right) -> bool:
    """Fayyad-Irani MDL test for splitting ``parent`` into ``left`` + ``right``."""
    n = int(parent.sum())
    n1, n2 = int(left.sum()), int(right.sum())
    ent, ent1, ent2 = _entropy(parent), _entropy(left), _entropy(right)
    gain = ent - (n1 * ent1 + n2 * ent2) / n
    k, k1, k2 = (int(np.count_nonzero(c)) for c in (parent, left, right))
    delta = math.log2(3 ** k - 2) - (k * ent - k1 * ent1 - k2 * ent2)
    return gain > (math.log2(n - 1) + delta) / n


def iem_mdl(values, labels, attr: int = -1, n_classes: int | None = None) -> DiscretizationScheme:
    """Recursive entropy-minimising cuts with MDL stopping."""
    values = np.asarray(values, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.int64)
    if values.shape != labels.shape:
        raise ValueError("values and labels must be aligned")
    known = ~np.isnan(values)
    values, labels = values[known], labels[known]
    if n_classes is None:
        n_classes = int(labels.max()) + 1 if labels.size else 1
    order = np.argsort(values, kind="stable")
    v = np.ascontiguousarray(values[order])
    y = np.ascontiguousarray(labels[order])
    cuts = []
    stack = [(0, v.size)]
    while stack:
        lo, hi = stack.pop()
        if hi - lo < 2:
            continue
        b, _ = _kernels.best_split(y, v, lo, hi, n_classes)
        if b < 0:
            continue
        parent = np.bincount(y[lo:hi], minlength=n_classes)
        left = np.bincount(y[lo:b + 1], minlength=n_classes)
        if not mdl_accepts(parent, left, parent - left):
            continue
        mid = (v[b] + v[b + 1]) / 2
        cuts.append(mid if v[b] < mid < v[b + 1] else v[b])
        stack.append((b + 1, hi))
        stack.append((lo, b + 1))
    return DiscretizationScheme(attr, tuple(sorted(cuts)), "iem")


def fit_scheme(method: str, ds: Dataset, attr: int, rows, k: int = 10) -> DiscretizationScheme:
    if not ds.attributes[attr].is_continuous:
        raise SchemaError(f"attribute {ds.attributes[attr].name!r} is nominal")
    rows = np.asarray(rows, dtype=np.int64)
    col = ds.X[rows, attr]
    if method == "ew":
        return equal_width(col, k, attr)
    if method == "ef":
        return equal_frequency(col, k, attr)
    if method == "iem":
        return iem_mdl(col, ds.y[rows], attr, len(ds.class_domain))
    raise ConfigurationError(f"unknown discretizer {method!r}")


def fit_schemes(method: str, ds: Dataset, rows, k: int = 10) -> list[DiscretizationScheme]:
    return [fit_scheme(method, ds, j, rows, k) for j in ds.continuous_indices]


def apply_scheme(scheme: DiscretizationScheme, ds: Dataset, rows=None) -> np.ndarray:
    """Interval id per row; missing values map to ``MISSING_ID``."""
    if not 0 <= scheme.attr < ds.n_attributes or not ds.attributes[scheme.attr].is_continuous:
        raise SchemaError(f"scheme refers to attribute {scheme.attr}, not a continuous attribute of {ds.name}")
    rows = np.arange(ds.n_rows) if rows is None else np.asarray(rows, dtype=np.int64)
    v = ds.X[rows, scheme.attr]
    ids = np.searchsorted(np.asarray(scheme.cut_points), v, side="left").astype(np.int64)
    ids[np.isnan(v)] = MISSING_ID
    return ids


def dump_schemes(schemes: Sequence[DiscretizationScheme]) -> str:
    lines = []
    for s in schemes:
        cuts = ",".join(repr(c) for c in s.cut_points) if s.cut_points else "All"
        lines.append(f"{s.attr}\t{s.method}\t{cuts}")
    return "".join(line + "\n" for line in lines)


def load_schemes(text: str) -> list[DiscretizationScheme]:
    """Parse scheme lines; any method name is accepted, so external discretizers can be imported."""
    schemes = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.rstrip("\n").split("\t")
        if len(parts) != 3:
            raise ValueError(f"line {lineno}: expected attr<TAB>method<TAB>cuts, got {line!r}")
        raw = parts[2].strip()
        cuts = () if raw in ("All", "") else tuple(float(t) for t in raw.split(","))
        try:
            schemes.append(DiscretizationScheme(int(parts[0]), cuts, parts[1].strip()))
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
    return schemes
