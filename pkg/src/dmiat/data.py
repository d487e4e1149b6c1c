"""Dataset container, CSV/KEEL ingestion, stratified folds and sorted access.

Cell values live in one float64 matrix.  Continuous columns hold the raw
reals, nominal columns hold the integer code of their symbol, and a missing
cell is NaN in both cases.  Class labels are integer codes into
``Dataset.class_domain``.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import ConfigurationError, EmptyDatasetError, ParseError, SchemaError

CONTINUOUS = "continuous"
NOMINAL = "nominal"
MISSING_TOKENS = frozenset({"?", "<null>"})


@dataclass(frozen=True)
class Attribute:
    name: str
    kind: str
    index: int
    symbols: tuple[str, ...] = ()

    @property
    def is_continuous(self) -> bool:
        return self.kind == CONTINUOUS


def _readonly(a):
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Dataset:
    attributes: tuple[Attribute, ...]
    X: np.ndarray
    y: np.ndarray
    class_domain: tuple[str, ...]
    name: str = "dataset"
    class_name: str = "class"

    def __post_init__(self):
        X = np.asarray(self.X, dtype=np.float64)
        y = np.asarray(self.y, dtype=np.int64)
        if X.ndim != 2 or X.shape[1] != len(self.attributes):
            raise SchemaError(f"value table shape {X.shape} does not match {len(self.attributes)} attributes")
        if y.shape != (X.shape[0],):
            raise SchemaError("labels length must equal row count")
        if len(self.class_domain) < 2:
            raise SchemaError("class domain needs at least two classes")
        if len(set(self.class_domain)) != len(self.class_domain):
            raise SchemaError("duplicate class symbols")
        if y.size and (y.min() < 0 or y.max() >= len(self.class_domain)):
            raise SchemaError("label code outside class domain")
        names = [a.name for a in self.attributes]
        if len(set(names)) != len(names):
            raise SchemaError("attribute names must be unique")
        for j, a in enumerate(self.attributes):
            if a.index != j:
                raise SchemaError(f"attribute {a.name!r} has index {a.index}, expected {j}")
            if a.is_continuous and np.isinf(X[:, j]).any():
                raise SchemaError(f"attribute {a.name!r} holds non-finite values")
        object.__setattr__(self, "X", _readonly(X))
        object.__setattr__(self, "y", _readonly(y))
        object.__setattr__(self, "attributes", tuple(self.attributes))
        object.__setattr__(self, "class_domain", tuple(self.class_domain))

    @property
    def n_rows(self) -> int:
        return self.X.shape[0]

    @property
    def n_attributes(self) -> int:
        return len(self.attributes)

    @property
    def continuous_indices(self) -> list[int]:
        return [a.index for a in self.attributes if a.is_continuous]

    @property
    def labels(self) -> list[str]:
        return [self.class_domain[c] for c in self.y]

    def attribute(self, name: str) -> Attribute:
        for a in self.attributes:
            if a.name == name:
                return a
        raise KeyError(name)

    def subset(self, rows) -> "Dataset":
        """Rows ``rows`` in the given order; schema and class domain are kept."""
        rows = np.asarray(rows, dtype=np.int64)
        return Dataset(self.attributes, self.X[rows], self.y[rows], self.class_domain,
                       self.name, self.class_name)

    def same_schema(self, other: "Dataset") -> bool:
        return (self.attributes == other.attributes
                and self.class_domain == other.class_domain)

    def cell_text(self, r: int, j: int) -> str:
        v = self.X[r, j]
        if np.isnan(v):
            return "?"
        a = self.attributes[j]
        if a.is_continuous:
            return repr(float(v))
        return a.symbols[int(v)]

    def __eq__(self, other):
        if not isinstance(other, Dataset):
            return NotImplemented
        return (self.attributes == other.attributes
                and self.class_domain == other.class_domain
                and self.class_name == other.class_name
                and np.array_equal(self.y, other.y)
                and np.array_equal(self.X, other.X, equal_nan=True))

    __hash__ = None

    def __repr__(self):
        return (f"Dataset({self.name!r}, rows={self.n_rows}, attributes={self.n_attributes}, "
                f"classes={len(self.class_domain)})")


@dataclass(frozen=True)
class FoldPair:
    train_idx: np.ndarray
    test_idx: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "train_idx", _readonly(np.asarray(self.train_idx, dtype=np.int64)))
        object.__setattr__(self, "test_idx", _readonly(np.asarray(self.test_idx, dtype=np.int64)))


@dataclass(frozen=True, eq=False)
class ClassDistribution:
    classes: tuple[str, ...]
    counts: np.ndarray = field(repr=False)

    def __post_init__(self):
        counts = np.asarray(self.counts, dtype=np.int64)
        if counts.shape != (len(self.classes),) or (counts < 0).any():
            raise ValueError("counts must be one non-negative integer per class")
        object.__setattr__(self, "counts", _readonly(counts))

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def _code(self, c) -> int:
        if isinstance(c, (int, np.integer)) and not isinstance(c, bool):
            return int(c)
        return self.classes.index(c)

    def __getitem__(self, c) -> int:
        return int(self.counts[self._code(c)])

    def as_dict(self, nonzero=True) -> dict:
        return {c: int(n) for c, n in zip(self.classes, self.counts) if n or not nonzero}

    def __eq__(self, other):
        if not isinstance(other, ClassDistribution):
            return NotImplemented
        return self.classes == other.classes and np.array_equal(self.counts, other.counts)

    __hash__ = None

    def __repr__(self):
        return f"ClassDistribution({self.as_dict()}, total={self.total})"


def _is_real(tok: str) -> bool:
    try:
        v = float(tok)
    except ValueError:
        return False
    return math.isfinite(v)


def _split_row(line: str) -> list[str]:
    return [t.strip() for t in line.split(",")]


def _build(name, names, kinds, cells, label_tokens, lines, class_name, declared_symbols=None):
    if not cells:
        raise EmptyDatasetError(f"{name}: no data rows")
    n, m = len(cells), len(names)
    X = np.full((n, m), np.nan)
    attrs = []
    for j in range(m):
        if kinds[j] == CONTINUOUS:
            for i, row in enumerate(cells):
                tok = row[j]
                if tok in MISSING_TOKENS:
                    continue
                try:
                    X[i, j] = float(tok)
                except ValueError:
                    raise ParseError(f"non-numeric value {tok!r} for continuous attribute {names[j]!r}",
                                     lines[i]) from None
                if not math.isfinite(X[i, j]):
                    raise ParseError(f"non-finite value for attribute {names[j]!r}", lines[i])
            attrs.append(Attribute(names[j], CONTINUOUS, j))
        else:
            symbols = list(declared_symbols[j]) if declared_symbols and declared_symbols[j] else []
            code = {s: k for k, s in enumerate(symbols)}
            for i, row in enumerate(cells):
                tok = row[j]
                if tok in MISSING_TOKENS:
                    continue
                if tok not in code:
                    code[tok] = len(symbols)
                    symbols.append(tok)
                X[i, j] = code[tok]
            attrs.append(Attribute(names[j], NOMINAL, j, tuple(symbols)))
    domain, y = [], np.empty(n, dtype=np.int64)
    index = {}
    for i, tok in enumerate(label_tokens):
        if tok == "" or tok in MISSING_TOKENS:
            raise ParseError(f"missing or unparseable class label {tok!r}", lines[i])
        if tok not in index:
            index[tok] = len(domain)
            domain.append(tok)
        y[i] = index[tok]
    if len(domain) < 2:
        raise ParseError(f"{name}: class column has fewer than two distinct labels")
    return Dataset(tuple(attrs), X, y, tuple(domain), name, class_name)


def _parse_csv(text: str, name: str) -> Dataset:
    header, lines, cells = None, [], []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        toks = _split_row(line)
        if header is None:
            header = toks
            if len(header) < 2:
                raise ParseError("csv header needs at least one attribute and a class column", lineno)
            continue
        if len(toks) != len(header):
            raise ParseError(f"expected {len(header)} fields, found {len(toks)}", lineno)
        cells.append(toks)
        lines.append(lineno)
    if header is None:
        raise EmptyDatasetError(f"{name}: empty input")
    m = len(header) - 1
    kinds = []
    for j in range(m):
        present = [row[j] for row in cells if row[j] not in MISSING_TOKENS]
        kinds.append(CONTINUOUS if all(_is_real(t) for t in present) else NOMINAL)
    return _build(name, header[:m], kinds, [row[:m] for row in cells],
                  [row[m] for row in cells], lines, header[m])


_ATTR_RE = re.compile(r"@attribute\s+('[^']*'|\"[^\"]*\"|\S+)\s*(.*)$", re.IGNORECASE)


def _parse_keel(text: str, name: str) -> Dataset:
    decl = []  # (name, kind, symbols)
    inputs = outputs = None
    in_data = False
    rows, lines = [], []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("%"):
            continue
        if not in_data:
            low = line.lower()
            if low.startswith("@relation"):
                parts = line.split(None, 1)
                if len(parts) > 1:
                    name = parts[1].strip().strip("'\"")
            elif low.startswith("@attribute"):
                mt = _ATTR_RE.match(line)
                if not mt:
                    raise ParseError(f"malformed attribute line {line!r}", lineno)
                aname, rest = mt.group(1).strip("'\""), mt.group(2).strip()
                if rest.startswith("{"):
                    if not rest.endswith("}"):
                        raise ParseError("unterminated nominal value list", lineno)
                    syms = tuple(s.strip() for s in rest[1:-1].split(",") if s.strip())
                    decl.append((aname, NOMINAL, syms))
                elif rest.split("[")[0].strip().lower() in ("real", "integer", "numeric"):
                    decl.append((aname, CONTINUOUS, ()))
                else:
                    raise ParseError(f"unknown attribute type {rest!r}", lineno)
            elif low.startswith("@inputs"):
                inputs = [t.strip() for t in line[len("@inputs"):].split(",") if t.strip()]
            elif low.startswith("@outputs") or low.startswith("@output"):
                outputs = [t.strip() for t in line.split(None, 1)[1].split(",") if t.strip()]
            elif low.startswith("@data"):
                in_data = True
            else:
                raise ParseError(f"unexpected header line {line!r}", lineno)
            continue
        toks = _split_row(line)
        if len(toks) != len(decl):
            raise ParseError(f"expected {len(decl)} fields, found {len(toks)}", lineno)
        rows.append(toks)
        lines.append(lineno)
    if not in_data:
        raise ParseError("missing @data section")
    names = [d[0] for d in decl]
    if outputs:
        if len(outputs) != 1 or outputs[0] not in names:
            raise ParseError(f"@outputs must name exactly one declared attribute, got {outputs}")
        cls = names.index(outputs[0])
    else:
        cls = len(decl) - 1
    if inputs:
        unknown = [t for t in inputs if t not in names]
        if unknown:
            raise ParseError(f"@inputs names undeclared attributes {unknown}")
        order = [names.index(t) for t in inputs if names.index(t) != cls]
    else:
        order = [j for j in range(len(decl)) if j != cls]
    return _build(name, [names[j] for j in order], [decl[j][1] for j in order],
                  [[row[j] for j in order] for row in rows], [row[cls] for row in rows],
                  lines, names[cls], [decl[j][2] for j in order])


def parse_table(text: str, format: str = "csv", name: str = "dataset") -> Dataset:
    """Parse CSV (header row, class last) or KEEL ``.dat`` text into a Dataset."""
    if format == "csv":
        return _parse_csv(text, name)
    if format == "keel":
        return _parse_keel(text, name)
    raise ConfigurationError(f"unknown table format {format!r}")


def format_table(ds: Dataset, format: str = "csv") -> str:
    """Inverse of :func:`parse_table`; floats are written with ``repr``."""
    names = [a.name for a in ds.attributes]
    out = []
    if format == "csv":
        out.append(",".join(names + [ds.class_name]))
    elif format == "keel":
        out.append(f"@relation {ds.name}")
        for a in ds.attributes:
            if a.is_continuous:
                col = ds.X[:, a.index]
                col = col[~np.isnan(col)]
                lo, hi = (float(col.min()), float(col.max())) if col.size else (0.0, 0.0)
                out.append(f"@attribute {a.name} real [{lo!r}, {hi!r}]")
            else:
                out.append(f"@attribute {a.name} {{{','.join(a.symbols)}}}")
        out.append(f"@attribute {ds.class_name} {{{','.join(ds.class_domain)}}}")
        out.append(f"@inputs {', '.join(names)}")
        out.append(f"@outputs {ds.class_name}")
        out.append("@data")
    else:
        raise ConfigurationError(f"unknown table format {format!r}")
    for r in range(ds.n_rows):
        out.append(",".join([ds.cell_text(r, j) for j in range(ds.n_attributes)]
                            + [ds.class_domain[ds.y[r]]]))
    return "\n".join(out) + "\n"


def load_dataset(path) -> Dataset:
    """Read a ``.csv`` or KEEL ``.dat`` file; the stem becomes the dataset name."""
    path = Path(path)
    fmt = "keel" if path.suffix.lower() in (".dat", ".keel") else "csv"
    return parse_table(path.read_text(), fmt, name=path.stem)


def bundled_dataset(name: str) -> Dataset:
    """One of the small datasets shipped with the package (``glass``, ``iris``)."""
    ref = resources.files("dmiat.datasets").joinpath(f"{name}.csv")
    return parse_table(ref.read_text(), "csv", name=name)


def stratified_kfold(ds: Dataset, k: int, seed: int = 7) -> list[FoldPair]:
    """Seeded stratified k-fold split.

    Each class is shuffled and dealt round-robin into the test folds.  The
    dealing position carries over from one class to the next so that total
    fold sizes, as well as per-class counts, differ by at most one.
    """
    if k < 2:
        raise ConfigurationError("k must be at least 2")
    if k > ds.n_rows:
        raise ConfigurationError(f"k={k} exceeds the {ds.n_rows} available rows")
    rng = np.random.default_rng(seed)
    assign = np.empty(ds.n_rows, dtype=np.int64)
    pos = 0
    for c in range(len(ds.class_domain)):
        members = np.flatnonzero(ds.y == c)
        members = members[rng.permutation(members.size)]
        assign[members] = (pos + np.arange(members.size)) % k
        pos = (pos + members.size) % k
    rows = np.arange(ds.n_rows)
    return [FoldPair(rows[assign != f], rows[assign == f]) for f in range(k)]


def sorted_order(ds: Dataset, attr: int, rows, return_missing: bool = False):
    """Rows ordered by the value of a continuous attribute.

    Ties keep ascending row-index order.  Rows whose value is missing are left
    out; with ``return_missing`` they are returned as a second array.
    """
    a = ds.attributes[attr]
    if not a.is_continuous:
        raise TypeError(f"attribute {a.name!r} is nominal and cannot be sorted")
    rows = np.sort(np.asarray(rows, dtype=np.int64))
    vals = ds.X[rows, attr]
    missing = np.isnan(vals)
    known = rows[~missing]
    order = known[np.argsort(vals[~missing], kind="stable")]
    if return_missing:
        return order, rows[missing]
    return order


def class_counts(ds: Dataset, rows) -> ClassDistribution:
    rows = np.asarray(rows, dtype=np.int64)
    counts = np.bincount(ds.y[rows], minlength=len(ds.class_domain))
    return ClassDistribution(ds.class_domain, counts)
