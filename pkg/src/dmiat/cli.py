"""Command line entry point.

    dmiat run --data 'data/*.dat' --folds 10 --seed 7 --out results/
    dmiat cuts builtin:glass --supp 0.1 --conf lift1.5
"""
import argparse
import logging
import sys

from . import _kernels
from .core import Criterion, DmiatConfig, dump_cuts, generate_cuts
from .errors import DmiatError
from .experiment import ExperimentConfig, _load, run_experiment


def _criteria(text):
    return tuple(Criterion.parse(t) for t in text.split(",") if t.strip())


def _disc(text):
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        if not tok:
            continue
        method, _, k = tok.partition(":")
        out.append((method, int(k) if k else 10))
    return tuple(out)


def _csv_list(text):
    return tuple(t.strip() for t in text.split(",") if t.strip())


def build_parser():
    p = argparse.ArgumentParser(prog="dmiat", description="D-MIAT cut features and discretization experiments")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="cross-validated comparison of dataset variants")
    run.add_argument("--data", action="append", required=True,
                     help="CSV/KEEL file, glob, or builtin:<name>; repeatable")
    run.add_argument("--folds", type=int, default=10)
    run.add_argument("--seed", type=int, default=7)
    run.add_argument("--supp", type=float, default=0.1)
    run.add_argument("--conf", type=_criteria, default="entropy0,lift1.5,lift2.0")
    run.add_argument("--support-basis", choices=("joint", "subset"), default="joint")
    run.add_argument("--disc", type=_disc, default="ew:10,ef:10,iem")
    run.add_argument("--variants", type=_csv_list, default="A,A+DMIAT,D,A+D,A+D+DMIAT")
    run.add_argument("--classifiers", type=_csv_list, default="nb,knn3,logistic")
    run.add_argument("--out", required=True)
    run.add_argument("--export-cuts", action="store_true", help="write fitted cuts and schemes per fold")
    run.add_argument("--export-variants", action="store_true", help="write composed train/test CSVs")
    run.add_argument("--import-schemes", help="directory of <dataset>.foldNN.tsv scheme files")

    cuts = sub.add_parser("cuts", help="print the cuts fitted on a whole dataset")
    cuts.add_argument("data")
    cuts.add_argument("--supp", type=float, default=0.1)
    cuts.add_argument("--conf", type=_criteria, default="entropy0,lift1.5,lift2.0")
    cuts.add_argument("--support-basis", choices=("joint", "subset"), default="joint")
    cuts.add_argument("--tsv", action="store_true", help="machine-readable output")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    logging.getLogger(__name__).info("kernel backend: %s", _kernels.BACKEND)
    try:
        if args.command == "run":
            config = ExperimentConfig(
                data=tuple(args.data), folds=args.folds, seed=args.seed, supp=args.supp,
                criteria=args.conf, support_basis=args.support_basis, disc=args.disc,
                variants=args.variants, classifiers=args.classifiers, out=args.out,
                export_cuts=args.export_cuts, export_variants=args.export_variants,
                import_schemes=args.import_schemes)
            table = run_experiment(config)
            for d, v, c, n, mean, std in table.summary():
                print(f"{d:<16} {v:<22} {c:<9} n={n:<3} mean={mean:.4f} std={std:.4f}")
            for source, err in table.failures:
                print(f"FAILED {source}: {err}", file=sys.stderr)
            return 1 if table.failures else 0
        ds = _load(args.data)
        found = generate_cuts(ds, range(ds.n_rows), DmiatConfig(args.supp, args.conf, args.support_basis))
        if args.tsv:
            sys.stdout.write(dump_cuts(found))
        else:
            for c in found:
                print(c.describe(ds.attributes[c.attr].name))
        return 0
    except DmiatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
