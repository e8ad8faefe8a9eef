"""Command-line entry point: discretize, select, benchmark, dea-solve."""

import argparse
import csv
import math
import os
import sys
import warnings
from dataclasses import dataclass

import numpy as np

from . import dataset as ds_mod
from . import dea, harness, lp, plots, selector
from .dataset import ConfigError, ParseError


def _fmt6(value) -> str:
    if value is None:
        return ""
    if math.isinf(value):
        return "inf"
    return f"{value:.6f}"


@dataclass
class RunConfig:
    command: str
    input: str = ""
    class_col: str | int = ""
    out: str = ""
    algorithms: tuple = ()
    delta: int | None = None
    folds: int = 10
    seed: int = 0
    threads: int = 1
    alpha: float = 1.0
    beta: float = 0.0
    gamma: float = 0.0
    relieff_neighbors: int = 5
    relieff_instances: int = 30
    cuts: str | None = None
    delimiter: str = ","
    has_header: bool = True
    class_categorical: bool = False
    fit_per_fold: bool = False
    warn_rule_of_thumb: bool = True
    figure: bool = True
    dump_lp: str | None = None


ALGORITHMS = ("dea-cs", "mim", "mrmr", "disr", "unified", "relieff")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="deacs",
        description="Feature selection by per-class-label dependence scores "
        "ranked with super-efficiency DEA, plus MI baselines and a "
        "cross-validation benchmark.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_io(p, need_class=True):
        p.add_argument("--input", required=True, help="input CSV file")
        if need_class:
            p.add_argument("--class-col", required=True,
                           help="class column name (or 0-based index)")
            p.add_argument("--class-categorical", action="store_true",
                           help="treat a numeric-looking class column as labels")
            p.add_argument("--delimiter", default=",")
            p.add_argument("--no-header", dest="has_header",
                           action="store_false")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--threads", type=int,
                       default=os.cpu_count() or 1)

    def add_selector_opts(p):
        p.add_argument("--delta", type=int, default=None,
                       help="number of features to select "
                       "(default: min(#features, 30))")
        p.add_argument("--alpha", type=float, default=None)
        p.add_argument("--beta", type=float, default=None)
        p.add_argument("--gamma", type=float, default=None)
        p.add_argument("--relieff-neighbors", type=int, default=None)
        p.add_argument("--relieff-instances", type=int, default=None)
        p.add_argument("--cuts", default=None,
                       help="cut-points JSON from `discretize` "
                       "(default: fit inline)")
        p.add_argument("--warn-rule-of-thumb",
                       action=argparse.BooleanOptionalAction, default=True)

    p = sub.add_parser("discretize", help="fit MDL cut points per numeric column")
    add_io(p)
    p.add_argument("--out", required=True, help="cut-points JSON to write")

    p = sub.add_parser("select", help="run one selector, write the trace")
    add_io(p)
    p.add_argument("--algo", required=True, choices=ALGORITHMS)
    add_selector_opts(p)
    p.add_argument("--out", required=True, help="selection-trace JSON to write")

    p = sub.add_parser("benchmark",
                       help="CV accuracy curves for one or more selectors")
    add_io(p)
    p.add_argument("--algo", required=True, action="append",
                   choices=ALGORITHMS, dest="algorithms",
                   help="may be given multiple times")
    add_selector_opts(p)
    p.add_argument("--folds", type=int, default=10)
    p.add_argument("--fit-per-fold", action="store_true",
                   help="refit discretization and selection inside each fold")
    p.add_argument("--out", required=True,
                   help="report base path ({out}.json/.csv/.png)")
    p.add_argument("--figure", action=argparse.BooleanOptionalAction,
                   default=True, help="render the accuracy-curve figure")

    p = sub.add_parser("dea-solve",
                       help="CCR and super-efficiency scores of a DMU matrix")
    p.add_argument("--input", required=True,
                   help="CSV of outputs, one row per DMU, no header")
    p.add_argument("--dump-lp", default=None, metavar="DIR",
                   help="also write each model as plain text for debugging")

    return parser


def _config_from_args(args) -> RunConfig:
    cfg = RunConfig(command=args.command)
    for name in vars(cfg):
        if hasattr(args, name):
            setattr(cfg, name, getattr(args, name))
    if args.command == "select":
        cfg.algorithms = (args.algo,)
    if args.command == "benchmark":
        cfg.algorithms = tuple(args.algorithms)

    if args.command in ("select", "benchmark"):
        unified_opts = {"alpha": args.alpha, "beta": args.beta,
                        "gamma": args.gamma}
        relieff_opts = {"relieff_neighbors": args.relieff_neighbors,
                        "relieff_instances": args.relieff_instances}
        if "unified" not in cfg.algorithms:
            given = [k for k, v in unified_opts.items() if v is not None]
            if given:
                raise ConfigError(
                    f"--{given[0]} only applies to --algo unified")
        if "relieff" not in cfg.algorithms:
            given = [k for k, v in relieff_opts.items() if v is not None]
            if given:
                raise ConfigError(
                    f"--{given[0].replace('_', '-')} only applies to "
                    "--algo relieff")
        cfg.alpha = 1.0 if args.alpha is None else args.alpha
        cfg.beta = 0.0 if args.beta is None else args.beta
        cfg.gamma = 0.0 if args.gamma is None else args.gamma
        cfg.relieff_neighbors = (5 if args.relieff_neighbors is None
                                 else args.relieff_neighbors)
        cfg.relieff_instances = (30 if args.relieff_instances is None
                                 else args.relieff_instances)
        if cfg.delta is not None and cfg.delta < 1:
            raise ConfigError("--delta must be >= 1")
    if args.command == "benchmark" and cfg.folds < 2:
        raise ConfigError("--folds must be >= 2")
    return cfg


def _class_column(cfg: RunConfig):
    col = cfg.class_col
    if isinstance(col, str) and col.lstrip("-").isdigit():
        return int(col)
    return col


def _load_table(cfg: RunConfig):
    return ds_mod.load_csv(
        cfg.input,
        class_column=_class_column(cfg),
        has_header=cfg.has_header,
        delimiter=cfg.delimiter,
        class_is_categorical=cfg.class_categorical,
    )


def _encode(cfg: RunConfig, table):
    if cfg.cuts:
        cuts = ds_mod.load_cuts(cfg.cuts)
    else:
        cuts = ds_mod.fit_cut_points(table)
    return ds_mod.encode(table, cuts)


def _run_selector(cfg: RunConfig, algo, ds) -> selector.SelectionTrace:
    delta = cfg.delta if cfg.delta is not None else min(ds.n_features, 30)
    if algo == "dea-cs":
        return selector.dea_cs_select(ds, delta, threads=cfg.threads)
    if algo == "mim":
        return selector.mim_select(ds, delta)
    if algo == "mrmr":
        return selector.mrmr_select(ds, delta)
    if algo == "disr":
        return selector.disr_select(ds, delta)
    if algo == "unified":
        return selector.unified_select(
            ds, delta,
            selector.CriterionConfig(cfg.alpha, cfg.beta, cfg.gamma),
        )
    if algo == "relieff":
        return selector.relieff_select(
            ds, delta, neighbors=cfg.relieff_neighbors,
            sampled_instances=cfg.relieff_instances, seed=cfg.seed,
        )
    raise ConfigError(f"unknown algorithm {algo!r}")


def cmd_discretize(cfg: RunConfig) -> int:
    table = _load_table(cfg)
    cuts = ds_mod.fit_cut_points(table)
    ds_mod.save_cuts(cuts, cfg.out)
    print(f"wrote {len(cuts)} cut-point set(s) to {cfg.out}")
    return 0


def cmd_select(cfg: RunConfig) -> int:
    table = _load_table(cfg)
    ds = _encode(cfg, table)
    trace = _run_selector(cfg, cfg.algorithms[0], ds)
    with open(cfg.out, "w", encoding="utf-8") as fh:
        fh.write(trace.to_json())
    for rank, (f, score) in enumerate(zip(trace.selected, trace.scores), 1):
        print(f"{rank}\t{ds.feature_names[f]}\t{_fmt6(score)}")
    if trace.stop_reason == selector.ALL_SCORES_ZERO:
        print(
            f"stopped after {len(trace)} feature(s): every remaining "
            "candidate scored zero on all class labels",
            file=sys.stderr,
        )
    return 0


_CLASSIFIERS = (harness.naive_bayes(), harness.k_nearest(1))


def _per_fold_curve(cfg, table, ds_base, folds, algo) -> harness.AccuracyCurve:
    """Strict protocol: cuts and ranking refit on each fold's training rows."""
    fold_traces = []
    fold_sets = []
    for j in range(folds.k):
        train_idx = folds.train_indices(j)
        cuts = ds_mod.fit_cut_points(table, rows=train_idx)
        ds_j = ds_mod.encode(table, cuts)
        trace = _run_selector(cfg, algo, ds_j.restrict(train_idx))
        if len(trace) == 0:
            raise ConfigError(
                f"{algo}: fold {j} selected no features (all scores zero)")
        fold_traces.append(trace)
        fold_sets.append(ds_j)
    top = min(min(len(t) for t in fold_traces), harness.CURVE_CAP)
    per_classifier = {kind.label: [] for kind in _CLASSIFIERS}
    mean_accuracy = []
    for m in range(1, top + 1):
        means = []
        for kind in _CLASSIFIERS:
            folds_acc = []
            for j in range(folds.k):
                pred = harness.predict_with(
                    fold_sets[j], kind, folds.train_indices(j),
                    folds.test_indices(j), fold_traces[j].selected[:m],
                )
                truth = fold_sets[j].class_codes[folds.test_indices(j)]
                folds_acc.append(float(np.mean(pred == truth)))
            acc = float(np.mean(folds_acc))
            per_classifier[kind.label].append(acc)
            means.append(acc)
        mean_accuracy.append(float(np.mean(means)))
    return harness.AccuracyCurve(
        algorithm=algo, mean_accuracy=mean_accuracy,
        per_classifier=per_classifier, folds=folds.k, seed=cfg.seed,
    )


def cmd_benchmark(cfg: RunConfig) -> int:
    table = _load_table(cfg)
    ds = _encode(cfg, table)
    folds = ds_mod.stratified_kfold(ds, cfg.folds, cfg.seed)
    curves = []
    for algo in cfg.algorithms:
        if cfg.fit_per_fold:
            curves.append(_per_fold_curve(cfg, table, ds, folds, algo))
            continue
        trace = _run_selector(cfg, algo, ds)
        if len(trace) == 0:
            raise ConfigError(f"{algo}: selected no features (all scores zero)")
        curves.append(
            harness.evaluate_curve(ds, trace, _CLASSIFIERS, folds,
                                   seed=cfg.seed)
        )
    json_path, csv_path = harness.emit_report(curves, cfg.out)
    written = [json_path, csv_path]
    if cfg.figure:
        written.append(plots.render_curves(curves, f"{cfg.out}.png"))
    print("wrote " + ", ".join(written))
    return 0


def cmd_dea_solve(cfg: RunConfig) -> int:
    rows = []
    with open(cfg.input, newline="", encoding="utf-8") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row:
                continue
            try:
                rows.append([float(cell) for cell in row])
            except ValueError:
                raise ParseError(
                    f"{cfg.input}: row {lineno}: non-numeric cell") from None
            if len(rows[-1]) != len(rows[0]):
                raise ParseError(
                    f"{cfg.input}: row {lineno} has {len(rows[-1])} cells, "
                    f"expected {len(rows[0])}")
    if not rows:
        raise ParseError(f"{cfg.input}: no data rows")
    inst = dea.DeaInstance(outputs=np.array(rows))
    if cfg.dump_lp:
        os.makedirs(cfg.dump_lp, exist_ok=True)
    print("dmu,ccr,super")
    everyone = np.arange(inst.n_dmus)
    for p in range(inst.n_dmus):
        ccr = dea.ccr_score(inst, p).value
        if inst.n_dmus == 1:
            sup = math.inf  # no peers: nothing can envelop the lone DMU
        else:
            sup = dea.super_efficiency_score(inst, p).value
        if cfg.dump_lp:
            base = os.path.join(cfg.dump_lp, f"dmu{p}")
            with open(f"{base}_ccr.lp", "w", encoding="utf-8") as fh:
                fh.write(lp.format_lp(dea.envelopment_lp(inst, p, everyone)))
            if inst.n_dmus > 1:
                peers = np.delete(everyone, p)
                with open(f"{base}_super.lp", "w", encoding="utf-8") as fh:
                    fh.write(lp.format_lp(dea.envelopment_lp(inst, p, peers)))
        print(f"{p},{_fmt6(ccr)},{_fmt6(sup)}")
    return 0


_COMMANDS = {
    "discretize": cmd_discretize,
    "select": cmd_select,
    "benchmark": cmd_benchmark,
    "dea-solve": cmd_dea_solve,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = _config_from_args(args)
        with warnings.catch_warnings():
            if not cfg.warn_rule_of_thumb:
                warnings.filterwarnings(
                    "ignore", category=dea.RuleOfThumbWarning)
            return _COMMANDS[cfg.command](cfg)
    except (ParseError, ConfigError, lp.LpError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
