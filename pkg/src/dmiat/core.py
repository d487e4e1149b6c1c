"""Minority-interesting-attribute-threshold cuts.

For every continuous attribute and every class, look for the widest interval
anchored at the attribute's minimum (``low``) or maximum (``high``) that holds
at least ``min_support`` training rows and shows a strong indication for the
class, then turn it into a 0/1 indicator column.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Sequence

import numpy as np

from . import _kernels
from .data import ClassDistribution, Dataset, class_counts, sorted_order
from .errors import ConfigurationError, DomainError, SchemaError

LOW = "low"
HIGH = "high"
DIRECTIONS = (LOW, HIGH)


@dataclass(frozen=True)
class Criterion:
    """``entropy`` with threshold 0 demands a pure subset; ``lift`` a minimum lift."""

    kind: str
    threshold: float = 0.0

    def __post_init__(self):
        if self.kind == "lift":
            if not self.threshold > 1:
                raise ConfigurationError("lift threshold must exceed 1")
        elif self.kind == "entropy":
            if not self.threshold >= 0:
                raise ConfigurationError("entropy threshold must be non-negative")
        else:
            raise ConfigurationError(f"unknown criterion kind {self.kind!r}")
        object.__setattr__(self, "threshold", float(self.threshold))

    @property
    def label(self) -> str:
        return f"{self.kind}{self.threshold:g}"

    @classmethod
    def parse(cls, text: str) -> "Criterion":
        text = text.strip().lower()
        for kind in ("entropy", "lift"):
            if text.startswith(kind):
                try:
                    return cls(kind, float(text[len(kind):] or 0))
                except ValueError:
                    break
        raise ConfigurationError(f"cannot parse criterion {text!r}; expected e.g. entropy0 or lift1.5")

    def __str__(self):
        return self.label


ENTROPY_ZERO = Criterion("entropy", 0.0)
DEFAULT_CRITERIA = (ENTROPY_ZERO, Criterion("lift", 1.5), Criterion("lift", 2.0))


SUPPORT_BASES = ("joint", "subset")


@dataclass(frozen=True)
class DmiatConfig:
    """Cut search settings.

    ``support_basis="subset"`` only asks the interval to hold
    ``min_support`` rows.  ``"joint"`` (default) additionally asks that many
    of them to carry the target class, i.e. support in the association-rule
    sense of the rule ``interval -> class``.
    """

    supp_fraction: float = 0.1
    criteria: tuple[Criterion, ...] = DEFAULT_CRITERIA
    support_basis: str = "joint"

    def __post_init__(self):
        if not 0 < self.supp_fraction <= 1:
            raise ConfigurationError("supp_fraction must lie in (0, 1]")
        if self.support_basis not in SUPPORT_BASES:
            raise ConfigurationError(f"support_basis must be one of {SUPPORT_BASES}")
        crit = tuple(dict.fromkeys(self.criteria))
        if not crit:
            raise ConfigurationError("at least one criterion is required")
        object.__setattr__(self, "criteria", crit)

    def min_support(self, n_train: int) -> int:
        # the 1e-9 keeps 0.1 * 90 from rounding up to 10
        return max(1, math.ceil(self.supp_fraction * n_train - 1e-9))


class Evidence(NamedTuple):
    subset_size: int
    subset_class_count: int
    achieved: float


@dataclass(frozen=True)
class CutFeature:
    attr: int
    direction: str
    threshold: float
    criterion: Criterion
    target_class: str
    evidence: Evidence = field(compare=False)

    def name(self, attr_name: str) -> str:
        return f"{attr_name}__dmiat_{self.direction}_{self.criterion.label}_{self.target_class}"

    def describe(self, attr_name: str) -> str:
        op = "<=" if self.direction == LOW else ">="
        return (f"{attr_name} {op} {self.threshold:g} -> {self.target_class} "
                f"[{self.criterion.label}, {self.evidence.subset_class_count}/{self.evidence.subset_size}]")


def entropy(dist: ClassDistribution) -> float:
    """Class entropy in bits."""
    total = dist.total
    if total < 1:
        raise DomainError("entropy of an empty distribution")
    h = 0.0
    for n in dist.counts:
        if n > 0:
            p = int(n) / total
            h += -(p * math.log2(p))
    return h


def lift(subset: ClassDistribution, whole: ClassDistribution, target) -> float:
    """Share of ``target`` inside ``subset`` relative to its share in ``whole``."""
    if subset.total < 1:
        raise DomainError("lift of an empty subset")
    if whole[target] < 1:
        raise DomainError(f"class {target!r} does not occur in the reference distribution")
    return (subset[target] / subset.total) / (whole[target] / whole.total)


def _pure_prefix(labels, values, target, min_support):
    # count of non-target rows in each prefix is non-decreasing: bisect for the first one
    mism = np.cumsum(labels != target)
    pure_len = int(np.searchsorted(mism, 1, side="left"))
    n = labels.shape[0]
    b = min(pure_len, n - 1) - 1
    while b >= 0 and not values[b] < values[b + 1]:
        b -= 1
    if b < 0 or b + 1 < min_support:
        return None
    return b, Evidence(b + 1, b + 1, 0.0)


def find_boundary(labels, values, target: int, direction: str, criterion: Criterion,
                  min_support: int, n_classes: Optional[int] = None,
                  base_rate: Optional[float] = None, min_hits: int = 0, fast: bool = True):
    """Widest qualifying extreme-anchored subset of a sorted column.

    ``labels`` are class codes and ``values`` the attribute values, both in
    ascending value order.  The boundary never splits a run of equal values
    and never covers the whole column.  Returns ``(index, Evidence)`` where
    the subset is ``[0..index]`` for ``low`` and ``[index..n-1]`` for
    ``high``, or ``None``.

    ``base_rate`` is the reference frequency of ``target`` for lift; by
    default its frequency within ``labels``.  ``min_hits`` is the least
    number of ``target`` rows the subset must hold.  A pure prefix is found
    by bisection unless ``fast`` is off.
    """
    labels = np.ascontiguousarray(labels, dtype=np.int64)
    values = np.ascontiguousarray(values, dtype=np.float64)
    n = labels.shape[0]
    if min_support < 1:
        raise ValueError("min_support must be at least 1")
    if n < 2:
        return None
    if n_classes is None:
        n_classes = int(labels.max()) + 1
    if direction == HIGH:
        labels, values = labels[::-1].copy(), -values[::-1]
    elif direction != LOW:
        raise ValueError(f"unknown direction {direction!r}")
    if criterion.kind == "entropy" and criterion.threshold == 0 and fast:
        found = _pure_prefix(labels, values, target, max(min_support, min_hits))
    else:
        if criterion.kind == "lift":
            if base_rate is None:
                hits = int(np.count_nonzero(labels == target))
                if hits == 0:
                    return None
                base_rate = hits / n
            kind = _kernels.KIND_LIFT
        else:
            kind = _kernels.KIND_ENTROPY
            base_rate = 1.0
        b, hit, stat = _kernels.scan_prefix(labels, values, int(target), int(n_classes), kind,
                                            criterion.threshold, float(base_rate), int(min_support),
                                            int(min_hits))
        found = None if b < 0 else (int(b), Evidence(int(b) + 1, int(hit), float(stat)))
    if found is None:
        return None
    b, ev = found
    return (b if direction == LOW else n - 1 - b), ev


def _midpoint(inside: float, outside: float) -> float:
    mid = (inside + outside) / 2
    # adjacent floats: keep the threshold on the inside value so the outside row stays excluded
    if not min(inside, outside) < mid < max(inside, outside):
        mid = inside
    return mid


def generate_cuts(ds: Dataset, train_rows, config: DmiatConfig = DmiatConfig()) -> list[CutFeature]:
    """Fit cuts on ``train_rows`` of every continuous attribute.

    Output order: attribute, class (domain order), low before high, criterion
    order.  Cuts sharing ``(attr, direction, threshold)`` collapse to the
    first one.
    """
    train_rows = np.asarray(train_rows, dtype=np.int64)
    min_support = config.min_support(train_rows.size)
    min_hits = min_support if config.support_basis == "joint" else 0
    n_classes = len(ds.class_domain)
    cuts, seen = [], set()
    for j in ds.continuous_indices:
        order = sorted_order(ds, j, train_rows)
        if order.size < 2:
            continue
        vals = ds.X[order, j]
        if vals[0] == vals[-1]:
            continue
        labs = ds.y[order]
        hits = np.bincount(labs, minlength=n_classes)
        for c in range(n_classes):
            if hits[c] == 0:
                continue
            base_rate = hits[c] / order.size
            for direction in DIRECTIONS:
                for crit in config.criteria:
                    res = find_boundary(labs, vals, c, direction, crit, min_support,
                                        n_classes=n_classes, base_rate=base_rate,
                                        min_hits=min_hits)
                    if res is None:
                        continue
                    b, ev = res
                    if direction == LOW:
                        thr = _midpoint(vals[b], vals[b + 1])
                    else:
                        thr = _midpoint(vals[b], vals[b - 1])
                    key = (j, direction, thr)
                    if key in seen:
                        continue
                    seen.add(key)
                    cuts.append(CutFeature(j, direction, float(thr), crit, ds.class_domain[c], ev))
    return cuts


def apply_cuts(cuts: Sequence[CutFeature], ds: Dataset, rows=None) -> np.ndarray:
    """0/1 indicator matrix (rows x cuts); a missing value gives 0."""
    rows = np.arange(ds.n_rows) if rows is None else np.asarray(rows, dtype=np.int64)
    out = np.zeros((rows.size, len(cuts)), dtype=np.uint8)
    for k, cut in enumerate(cuts):
        if not 0 <= cut.attr < ds.n_attributes or not ds.attributes[cut.attr].is_continuous:
            raise SchemaError(f"cut refers to attribute {cut.attr}, not a continuous attribute of {ds.name}")
        v = ds.X[rows, cut.attr]
        with np.errstate(invalid="ignore"):
            hit = v <= cut.threshold if cut.direction == LOW else v >= cut.threshold
        out[:, k] = hit & ~np.isnan(v)
    return out


def subset_rows(cut: CutFeature, ds: Dataset, rows) -> np.ndarray:
    """The rows of ``rows`` that fall inside the cut's interval."""
    rows = np.asarray(rows, dtype=np.int64)
    return rows[apply_cuts([cut], ds, rows)[:, 0].astype(bool)]


def dump_cuts(cuts: Sequence[CutFeature]) -> str:
    lines = []
    for c in cuts:
        lines.append("\t".join([str(c.attr), c.direction, repr(c.threshold), c.criterion.label,
                                c.target_class, str(c.evidence.subset_size),
                                str(c.evidence.subset_class_count)]))
    return "".join(line + "\n" for line in lines)


def load_cuts(text: str) -> list[CutFeature]:
    """Read cuts written by :func:`dump_cuts`; the achieved statistic is not stored."""
    cuts = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 7 or parts[1] not in DIRECTIONS:
            raise ValueError(f"line {lineno}: malformed cut record {line!r}")
        cuts.append(CutFeature(int(parts[0]), parts[1], float(parts[2]), Criterion.parse(parts[3]),
                               parts[4], Evidence(int(parts[5]), int(parts[6]), math.nan)))
    return cuts


def recompute_evidence(cut: CutFeature, ds: Dataset, train_rows) -> tuple[ClassDistribution, ClassDistribution]:
    """(subset, whole) class distributions of a cut on its training rows."""
    train_rows = np.asarray(train_rows, dtype=np.int64)
    known = train_rows[~np.isnan(ds.X[train_rows, cut.attr])]
    return class_counts(ds, subset_rows(cut, ds, known)), class_counts(ds, known)
