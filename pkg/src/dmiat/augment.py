"""Build dataset variants (A, D, A+D, A+DMIAT, A+D+DMIAT) for one fold.

Every generated column is fit on the training rows of the fold and then
applied unchanged to both sides.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

import numpy as np

from .core import CutFeature, DmiatConfig, apply_cuts, generate_cuts
from .data import NOMINAL, Attribute, Dataset, FoldPair
from .discretizers import METHODS, DiscretizationScheme, apply_scheme, fit_schemes
from .errors import ConfigurationError, EmptyVariantError

DMIAT_SYMBOLS = ("0", "1")


@dataclass(frozen=True)
class VariantSpec:
    name: str
    include_original: bool = True
    discretizers: tuple[str, ...] = ()
    dmiat: Optional[DmiatConfig] = None

    def __post_init__(self):
        if not (self.include_original or self.discretizers or self.dmiat):
            raise ConfigurationError(f"variant {self.name!r} selects no columns")


def parse_variants(tokens: Sequence[str], methods: Sequence[str],
                   dmiat: Optional[DmiatConfig] = None) -> list[VariantSpec]:
    """Expand variant names such as ``A+D+DMIAT``.

    ``A`` keeps the original attributes, ``DMIAT`` adds the cut indicators,
    ``D`` stands for each method in ``methods`` in turn, and a method name
    (``iem``, ``ef``, an imported one) adds that discretizer directly.
    """
    dmiat = dmiat or DmiatConfig()
    out = []
    for token in tokens:
        parts = [p.strip() for p in token.split("+") if p.strip()]
        if not parts:
            raise ConfigurationError(f"empty variant {token!r}")
        expansions = [m for m in methods] if "D" in parts else [None]
        for m in expansions:
            discs = []
            for p in parts:
                if p in ("A", "DMIAT"):
                    continue
                discs.append(m if p == "D" else p)
            name = "+".join(f"D[{m}]" if p == "D" else p for p in parts)
            out.append(VariantSpec(name, "A" in parts, tuple(dict.fromkeys(discs)),
                                   dmiat if "DMIAT" in parts else None))
    names = [v.name for v in out]
    if len(set(names)) != len(names):
        raise ConfigurationError(f"duplicate variants in {list(tokens)}")
    return out


@dataclass
class FoldFit:
    """Everything learned from one training fold."""

    cuts: list[CutFeature] = field(default_factory=list)
    schemes: dict[str, list[DiscretizationScheme]] = field(default_factory=dict)


def fit_fold(ds: Dataset, fold: FoldPair, methods: Sequence[str] = (), k=10,
             dmiat: Optional[DmiatConfig] = None,
             imported: Optional[Mapping[str, Sequence[DiscretizationScheme]]] = None) -> FoldFit:
    """Fit the requested discretizers and cuts on ``fold.train_idx``.

    ``k`` is the interval count for equal-width/frequency, either one int or
    a mapping from method name to int.  Methods found in ``imported`` use
    those schemes as given.
    """
    fit = FoldFit()
    imported = imported or {}
    for m in methods:
        if m in imported:
            fit.schemes[m] = list(imported[m])
        elif m in METHODS:
            fit.schemes[m] = fit_schemes(m, ds, fold.train_idx, k.get(m, 10) if isinstance(k, Mapping) else k)
        else:
            raise ConfigurationError(f"no discretizer or imported scheme named {m!r}")
    if dmiat is not None:
        fit.cuts = generate_cuts(ds, fold.train_idx, dmiat)
    return fit


def _block_columns(ds: Dataset, rows, spec: VariantSpec, fit: FoldFit):
    cols, attrs = [], []
    names = [a.name for a in ds.attributes]
    if spec.include_original:
        for a in ds.attributes:
            attrs.append((a.name, a.kind, a.symbols))
            cols.append(ds.X[rows, a.index])
    else:
        for a in ds.attributes:
            if a.kind == NOMINAL:
                attrs.append((a.name, a.kind, a.symbols))
                cols.append(ds.X[rows, a.index])
    for m in spec.discretizers:
        for s in fit.schemes[m]:
            ids = apply_scheme(s, ds, rows).astype(np.float64)
            ids[ids < 0] = np.nan
            attrs.append((f"{names[s.attr]}__{m}", NOMINAL,
                          tuple(f"bin{i}" for i in range(s.n_intervals))))
            cols.append(ids)
    if spec.dmiat is not None and fit.cuts:
        block = apply_cuts(fit.cuts, ds, rows).astype(np.float64)
        for c, cut in enumerate(fit.cuts):
            attrs.append((cut.name(names[cut.attr]), NOMINAL, DMIAT_SYMBOLS))
            cols.append(block[:, c])
    return attrs, cols


def _assemble(ds: Dataset, rows, spec: VariantSpec, fit: FoldFit) -> Dataset:
    rows = np.asarray(rows, dtype=np.int64)
    meta, cols = _block_columns(ds, rows, spec, fit)
    if not meta:
        raise EmptyVariantError(f"variant {spec.name!r} produced no columns for {ds.name}")
    attrs = tuple(Attribute(name, kind, j, symbols) for j, (name, kind, symbols) in enumerate(meta))
    X = np.column_stack(cols) if rows.size else np.empty((0, len(attrs)))
    return Dataset(attrs, X, ds.y[rows], ds.class_domain, f"{ds.name}:{spec.name}", ds.class_name)


def compose(ds: Dataset, fold: FoldPair, spec: VariantSpec, fit: Optional[FoldFit] = None,
            k: int = 10, imported=None) -> tuple[Dataset, Dataset]:
    """Train and test Datasets for one variant of one fold.

    Column order: original attributes (or only the nominal ones when ``A`` is
    not selected), then discretizer columns in block and attribute order,
    then cut indicators.  Pass ``fit`` to reuse statistics shared by several
    variants of the same fold.
    """
    if fit is None:
        fit = fit_fold(ds, fold, spec.discretizers, k, spec.dmiat, imported)
    missing = [m for m in spec.discretizers if m not in fit.schemes]
    if missing:
        raise ConfigurationError(f"fold fit lacks schemes for {missing}")
    return _assemble(ds, fold.train_idx, spec, fit), _assemble(ds, fold.test_idx, spec, fit)
