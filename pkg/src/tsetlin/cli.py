"""Command-line entry point.

Subcommands:

* ``train``   fit a model on a feature CSV (or a series CSV plus a
              target region) and write the model document.
* ``eval``    evaluate a saved model on a holdout set, or run k-fold
              cross-validation from config flags.
* ``explain`` dump the trained clauses as readable rules.
* ``synth``   generate the bundled synthetic datasets.

Exit codes: 0 success, 2 usage error, 3 data error, 4 config error.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys

import numpy as np

from . import data as data_mod
from . import evaluation, explain, model_io
from .binarizer import EncodingError
from .data import DataError
from .machine import ConfigError
from .pipeline import ModelConfig, fit_pipeline

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_CONFIG = 4

SEED_ENV_VAR = "TSETLIN_SEED"


def _default_seed() -> int:
    return int(os.environ.get(SEED_ENV_VAR, "0"))


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--clauses", type=int, default=4,
                        help="total clause budget, split evenly across classes")
    parser.add_argument("--states", type=int, default=100,
                        help="TA states per action (N)")
    parser.add_argument("--threshold", type=int, default=1,
                        help="vote-sum target T")
    parser.add_argument("--s", type=float, default=8.0,
                        help="feedback granularity s")
    parser.add_argument("--epochs", type=int, default=100)
    parser.add_argument("--negative-sampling", choices=("single", "all"),
                        default="single")
    parser.add_argument("--categorical", default="",
                        help="comma-separated feature names to one-hot encode")
    parser.add_argument("--max-thresholds", type=int, default=None,
                        help="optional cap on thresholds per continuous feature")


def _add_data_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument("--data", help="feature CSV with a trailing label column")
    group.add_argument("--series", help="region,year,month,rate CSV")
    parser.add_argument("--target", help="target region (series mode)")
    parser.add_argument("--neighbors",
                        help="JSON file mapping target region to source regions "
                             "(default: the bundled mapping)")


def _config_from_args(args) -> ModelConfig:
    categorical = tuple(c for c in args.categorical.split(",") if c)
    return ModelConfig(
        clauses=args.clauses,
        states_per_action=args.states,
        threshold=args.threshold,
        s=args.s,
        epochs=args.epochs,
        negative_sampling=args.negative_sampling,
        categorical=categorical,
        max_thresholds=args.max_thresholds,
    )


def _load_dataset(args) -> data_mod.LabeledDataset:
    if args.data:
        with open(args.data, encoding="utf-8") as fh:
            return data_mod.load_labeled_csv(fh)
    if not args.target:
        raise DataError("--series requires --target")
    with open(args.series, encoding="utf-8") as fh:
        table = data_mod.load_series(fh)
    if args.neighbors:
        with open(args.neighbors, encoding="utf-8") as fh:
            neighbors = json.load(fh)
    else:
        neighbors = data_mod.DEFAULT_NEIGHBORS
    if args.target not in neighbors:
        raise DataError(f"no neighbor configuration for region {args.target!r}")
    return data_mod.build_lag_features(table, args.target, neighbors[args.target])


def _maybe_filter_year(dataset, year):
    if year is None:
        return dataset
    if dataset.periods is None:
        raise DataError("--test-year needs a series-derived dataset")
    keep = [i for i, (y, _) in enumerate(dataset.periods) if y == year]
    if not keep:
        raise DataError(f"no rows in year {year}")
    return dataset.subset(keep)


def cmd_train(args) -> int:
    config = _config_from_args(args)
    dataset = _load_dataset(args)
    if args.test_year is not None:
        if dataset.periods is None:
            raise DataError("--test-year needs a series-derived dataset")
        keep = [i for i, (y, _) in enumerate(dataset.periods) if y != args.test_year]
        if not keep:
            raise DataError(f"holding out year {args.test_year} leaves no training data")
        dataset = dataset.subset(keep)
    pipeline, snapshots = fit_pipeline(
        dataset, config, args.seed, trace=args.trace is not None
    )
    model_io.save(pipeline, args.out)
    if args.trace is not None:
        _write_trace(snapshots, args.trace)
    print(f"trained {args.clauses} clauses on {len(dataset)} samples "
          f"({pipeline.encoder.n_bits} input bits); model written to {args.out}")
    return EXIT_OK


def _write_trace(snapshots, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["epoch", "class", "clause", "ta", "state"])
        for epoch, snap in enumerate(snapshots, start=1):
            q, m, two_n = snap.shape
            for j in range(q):
                for i in range(m):
                    for t in range(two_n):
                        writer.writerow([epoch, j, i + 1, t, int(snap[j, i, t])])


def cmd_eval(args) -> int:
    dataset = _load_dataset(args)
    if args.model:
        if args.folds is not None:
            raise ConfigError("--model and --folds are mutually exclusive")
        pipeline = model_io.load(args.model)
        subset = _maybe_filter_year(dataset, args.test_year)
        result = evaluation.holdout_evaluate(pipeline, subset)
        if args.format == "json":
            print(json.dumps(result, sort_keys=True, indent=2))
        else:
            print("  ".join(f"{k} {v:.2f}" for k, v in result.items()))
        return EXIT_OK
    if args.folds is None:
        raise ConfigError("either --model or --folds is required")
    if args.folds < 2:
        raise ConfigError("need at least 2 folds")
    config = _config_from_args(args)
    report = evaluation.cross_validate(
        dataset, config, args.folds, args.seed, repeats=args.repeats
    )
    print(report.to_json() if args.format == "json" else report.to_text_table())
    return EXIT_OK


def cmd_explain(args) -> int:
    pipeline = model_io.load(args.model)
    rules = explain.machine_rules(pipeline.machine, pipeline.encoder)
    if args.format == "structured":
        doc = [
            {
                "class": r["class"],
                "clause": r["clause"],
                "polarity": r["polarity"],
                "rule": r["rule"].text,
                "unsatisfiable": r["rule"].unsatisfiable,
                "empty": r["rule"].empty,
            }
            for r in rules
        ]
        print(json.dumps(doc, indent=2))
    else:
        for r in rules:
            sign = "+" if r["polarity"] > 0 else "-"
            print(f"class {r['class']} clause {r['clause']} ({sign}): "
                  f"{r['rule'].text}")
    return EXIT_OK


def cmd_synth(args) -> int:
    rng = np.random.default_rng(args.seed)
    if args.kind == "artificial":
        dataset = data_mod.generate_artificial(
            rng, args.n, positive_fraction=args.positive_fraction
        )
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            data_mod.write_labeled_csv(dataset, fh)
    elif args.kind == "planted-outbreak":
        table, neighbors = data_mod.generate_planted_outbreak(
            rng, months=args.months, cutoff=args.cutoff
        )
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            data_mod.write_series(table, fh)
        if args.neighbors_out:
            with open(args.neighbors_out, "w", encoding="utf-8", newline="\n") as fh:
                json.dump(neighbors, fh, indent=2, sort_keys=True)
                fh.write("\n")
    else:  # argparse choices guard this
        raise ConfigError(f"unknown dataset kind {args.kind!r}")
    print(f"wrote {args.kind} dataset to {args.out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tsetlin",
        description="Tsetlin Machine training, evaluation, and explanation",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_train = sub.add_parser("train", help="fit a model and write it to disk")
    _add_data_flags(p_train)
    _add_config_flags(p_train)
    p_train.add_argument("--seed", type=int, default=_default_seed())
    p_train.add_argument("--test-year", type=int, default=None,
                         help="hold this year out of training (series mode)")
    p_train.add_argument("--out", required=True, help="model output path")
    p_train.add_argument("--trace",
                         help="write a per-epoch TA state table to this CSV")
    p_train.set_defaults(func=cmd_train)

    p_eval = sub.add_parser("eval", help="holdout or cross-validated metrics")
    _add_data_flags(p_eval)
    _add_config_flags(p_eval)
    p_eval.add_argument("--seed", type=int, default=_default_seed())
    p_eval.add_argument("--model", help="saved model for holdout evaluation")
    p_eval.add_argument("--test-year", type=int, default=None,
                        help="restrict holdout rows to this year (series mode)")
    p_eval.add_argument("--folds", type=int, default=None)
    p_eval.add_argument("--repeats", type=int, default=1)
    p_eval.add_argument("--format", choices=("text", "json"), default="text")
    p_eval.set_defaults(func=cmd_eval)

    p_explain = sub.add_parser("explain", help="dump clauses as rules")
    p_explain.add_argument("--model", required=True)
    p_explain.add_argument("--format", choices=("text", "structured"),
                           default="text")
    p_explain.set_defaults(func=cmd_explain)

    p_synth = sub.add_parser("synth", help="generate synthetic datasets")
    p_synth.add_argument("--kind", required=True,
                         choices=("artificial", "planted-outbreak"))
    p_synth.add_argument("--n", type=int, default=1000,
                         help="sample count (artificial)")
    p_synth.add_argument("--months", type=int, default=96,
                         help="series length (planted-outbreak)")
    p_synth.add_argument("--cutoff", type=float, default=20.0,
                         help="planted neighbor cutoff (planted-outbreak)")
    p_synth.add_argument("--positive-fraction", type=float, default=None)
    p_synth.add_argument("--seed", type=int, default=_default_seed())
    p_synth.add_argument("--out", required=True)
    p_synth.add_argument("--neighbors-out",
                         help="also write the matching neighbor config JSON")
    p_synth.set_defaults(func=cmd_synth)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (DataError, EncodingError, model_io.ModelFormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
