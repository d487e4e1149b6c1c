"""Batch runner: folds, fitted blocks, variants, classifiers, CSV tables."""
from __future__ import annotations

import csv
import glob
import io
import logging
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .augment import compose, fit_fold, parse_variants
from .classify import AccuracyRecord, canonical, evaluate
from .core import DEFAULT_CRITERIA, Criterion, DmiatConfig, dump_cuts, generate_cuts
from .data import Dataset, bundled_dataset, format_table, load_dataset, stratified_kfold
from .discretizers import METHODS, dump_schemes, load_schemes
from .errors import ConfigurationError, DmiatError, EmptyVariantError

log = logging.getLogger(__name__)

RESULTS_HEADER = ["dataset", "variant", "classifier", "fold", "accuracy"]
SUMMARY_HEADER = ["dataset", "variant", "classifier", "folds", "mean", "std"]


@dataclass(frozen=True)
class ExperimentConfig:
    data: tuple[str, ...]
    folds: int = 10
    seed: int = 7
    supp: float = 0.1
    criteria: tuple[Criterion, ...] = DEFAULT_CRITERIA
    support_basis: str = "joint"
    disc: tuple[tuple[str, int], ...] = (("ew", 10), ("ef", 10), ("iem", 10))
    variants: tuple[str, ...] = ("A", "A+DMIAT", "D", "A+D", "A+D+DMIAT")
    classifiers: tuple[str, ...] = ("nb", "knn3", "logistic")
    out: Optional[str] = None
    export_cuts: bool = False
    export_variants: bool = False
    import_schemes: Optional[str] = None

    def __post_init__(self):
        if not self.variants:
            raise ConfigurationError("variant list is empty")
        if not self.data:
            raise ConfigurationError("no datasets given")
        object.__setattr__(self, "classifiers", tuple(canonical(c) for c in self.classifiers))
        for m, _ in self.disc:
            if m not in METHODS and not self.import_schemes:
                raise ConfigurationError(f"discretizer {m!r} is not built in and no --import-schemes dir is given")

    @property
    def dmiat(self) -> DmiatConfig:
        return DmiatConfig(self.supp, tuple(self.criteria), self.support_basis)

    @property
    def disc_k(self) -> dict:
        return dict(self.disc)


@dataclass
class ResultsTable:
    records: list[AccuracyRecord] = field(default_factory=list)
    feature_counts: list[dict] = field(default_factory=list)
    skipped: list[tuple] = field(default_factory=list)
    failures: list[tuple] = field(default_factory=list)

    def sort(self):
        self.records.sort(key=lambda r: (r.dataset, r.variant, r.classifier, r.fold))
        self.feature_counts.sort(key=lambda r: (r["dataset"], r["fold"]))
        self.skipped.sort()
        self.failures.sort()

    def summary(self) -> list[tuple]:
        groups: dict = {}
        for r in self.records:
            groups.setdefault((r.dataset, r.variant, r.classifier), []).append(r.accuracy)
        out = []
        for key in sorted(groups):
            acc = np.array(groups[key])
            std = float(acc.std(ddof=1)) if acc.size > 1 else 0.0
            out.append((*key, acc.size, float(acc.mean()), std))
        return out

    def mean(self, dataset: str, variant: str, classifier: str) -> float:
        acc = [r.accuracy for r in self.records
               if (r.dataset, r.variant, r.classifier) == (dataset, variant, classifier)]
        return float(np.mean(acc)) if acc else float("nan")


def resolve_data(patterns: Sequence[str]) -> list[str]:
    """Expand globs; ``builtin:<name>`` refers to a bundled dataset."""
    out = []
    for p in patterns:
        if p.startswith("builtin:"):
            out.append(p)
            continue
        hits = sorted(glob.glob(p))
        out.extend(hits if hits else [p])
    return out


def _load(source: str) -> Dataset:
    if source.startswith("builtin:"):
        return bundled_dataset(source.split(":", 1)[1])
    return load_dataset(source)


def _imported_for(config: ExperimentConfig, name: str, fold: int) -> dict:
    if not config.import_schemes:
        return {}
    path = Path(config.import_schemes) / f"{name}.fold{fold:02d}.tsv"
    if not path.exists():
        return {}
    by_method: dict = {}
    for s in load_schemes(path.read_text()):
        by_method.setdefault(s.method, []).append(s)
    return by_method


def _safe(name: str) -> str:
    return re.sub(r"[^A-Za-z0-9_.-]+", "_", name)


def _run_dataset(ds: Dataset, config: ExperimentConfig, table: ResultsTable, out: Optional[Path]):
    specs = parse_variants(config.variants, [m for m, _ in config.disc], config.dmiat)
    needed = list(dict.fromkeys(m for s in specs for m in s.discretizers))
    dmiat = config.dmiat
    folds = stratified_kfold(ds, config.folds, config.seed)
    for f, fold in enumerate(folds):
        imported = _imported_for(config, ds.name, f)
        fit = fit_fold(ds, fold, needed, config.disc_k, dmiat, imported)
        row = {"dataset": ds.name, "n_continuous": len(ds.continuous_indices), "fold": f}
        for crit in dmiat.criteria:
            single = DmiatConfig(dmiat.supp_fraction, (crit,), dmiat.support_basis)
            row[crit.label] = len(generate_cuts(ds, fold.train_idx, single))
        row["combined"] = len(fit.cuts)
        table.feature_counts.append(row)
        if out is not None and config.export_cuts:
            _write(out / "cuts" / f"{ds.name}.fold{f:02d}.tsv", dump_cuts(fit.cuts))
            schemes = [s for m in needed for s in fit.schemes[m]]
            _write(out / "schemes" / f"{ds.name}.fold{f:02d}.tsv", dump_schemes(schemes))
        for spec in specs:
            try:
                train_ds, test_ds = compose(ds, fold, spec, fit)
            except EmptyVariantError as exc:
                table.skipped.append((ds.name, spec.name, f, str(exc)))
                continue
            if out is not None and config.export_variants:
                base = out / "variants" / ds.name / f"{_safe(spec.name)}.fold{f:02d}"
                _write(base.with_name(base.name + ".train.csv"), format_table(train_ds))
                _write(base.with_name(base.name + ".test.csv"), format_table(test_ds))
            for clf in config.classifiers:
                table.records.append(evaluate(clf, train_ds, test_ds, ds.name, spec.name, f))


def _write(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


def run_experiment(config: ExperimentConfig) -> ResultsTable:
    """Run every dataset; a dataset that fails is recorded and skipped."""
    table = ResultsTable()
    out = Path(config.out) if config.out else None
    for source in resolve_data(config.data):
        part = ResultsTable()
        try:
            ds = _load(source)
            log.info("running %s (%d rows, %d attributes)", ds.name, ds.n_rows, ds.n_attributes)
            _run_dataset(ds, config, part, out)
        except (OSError, ValueError, DmiatError) as exc:
            log.error("dataset %s failed: %s", source, exc)
            table.failures.append((source, f"{type(exc).__name__}: {exc}"))
            continue
        table.records += part.records
        table.feature_counts += part.feature_counts
        table.skipped += part.skipped
    table.sort()
    if out is not None:
        emit_results(table, out)
    return table


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def emit_results(table: ResultsTable, out) -> list[Path]:
    """Write results.csv, summary.csv, feature_counts.csv, skipped.csv and failures.csv."""
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    table.sort()
    files = {
        "results.csv": _csv_text(RESULTS_HEADER, [(r.dataset, r.variant, r.classifier, r.fold, f"{r.accuracy:.6f}")
                                                  for r in table.records]),
        "summary.csv": _csv_text(SUMMARY_HEADER, [(d, v, c, n, f"{m:.6f}", f"{s:.6f}")
                                                  for d, v, c, n, m, s in table.summary()]),
        "skipped.csv": _csv_text(["dataset", "variant", "fold", "reason"], table.skipped),
        "failures.csv": _csv_text(["source", "error"], table.failures),
    }
    counts_header = ["dataset", "n_continuous", "fold"]
    for row in table.feature_counts:
        counts_header += [k for k in row if k not in counts_header]
    files["feature_counts.csv"] = _csv_text(counts_header, [[row.get(k, "") for k in counts_header]
                                                            for row in table.feature_counts])
    written = []
    for name, text in files.items():
        path = out / name
        path.write_text(text)
        written.append(path)
    return written
