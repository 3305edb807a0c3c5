"""Command-line surface: train, predict, eval, subsample, cv."""

from __future__ import annotations

import argparse
import os
import sys

from .classifier import (
    TrainConfig,
    fit_frlstsvm,
    load_model,
    predict,
    save_model,
)
from .dataset import (
    load_csv,
    load_keel,
    load_matrix_csv,
    minmax_apply,
    minmax_fit,
)
from .errors import ExperimentError, FrlstsvmError
from .experiment import (
    CvResult,
    _aggregate,
    atomic_write,
    format_cv_table,
    parse_config,
    run_nested_cv,
    write_cv_result,
)
from .fuzzy_rough import (
    IMPLICATORS,
    SCORE_MODES,
    T_NORMS,
    FuzzyParams,
    positive_region_scores,
)
from .metrics import confusion, csv_line, format_report, report


def _column(text: str):
    try:
        return int(text)
    except ValueError:
        return text


def _score_mode(text: str) -> str:
    return text.replace("-", "_")


def _add_data_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--data", required=True, help="input data file")
    p.add_argument("--format", choices=("csv", "keel"), default="csv")
    p.add_argument("--positive-label", default=None,
                   help="raw label mapped to +1 (default: smaller class)")
    p.add_argument("--label-column", type=_column, default=-1,
                   help="CSV label column index or header name")
    p.add_argument("--header", action="store_true",
                   help="CSV file starts with a header row")


def _add_fuzzy_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("--tnorm", choices=T_NORMS, default="minimum")
    p.add_argument("--implicator", choices=IMPLICATORS,
                   default="lukasiewicz")
    p.add_argument("--score-mode", type=_score_mode, default="density",
                   help="density or lower-approx")


def _load_labeled(args):
    if args.format == "keel":
        return load_keel(args.data, args.positive_label)
    return load_csv(args.data, args.label_column, args.positive_label,
                    args.header)


def _config_from_args(args) -> TrainConfig:
    fuzzy = FuzzyParams(gamma=args.gamma, tnorm=args.tnorm,
                        implicator=args.implicator,
                        score_mode=args.score_mode)
    return TrainConfig(
        c1=args.c1, c2=args.c2, tau=args.tau, fuzzy=fuzzy,
        delta=args.delta, kernel=args.kernel, sigma=args.sigma,
        subsample_enabled=not args.no_subsample,
        weights_enabled=not args.no_weights,
    )


def cmd_train(args) -> int:
    ds = _load_labeled(args)
    model = fit_frlstsvm(ds, _config_from_args(args))
    save_model(model, args.out)
    s = model.summary
    print(
        f"trained {args.kernel} model on {ds.n_rows} rows "
        f"({s.m1} minority, {s.m2_kept}/{s.m2_total} majority kept), "
        f"saved to {args.out}"
    )
    return 0


def _prediction_features(args, model):
    if args.format == "keel":
        return load_keel(args.data, args.positive_label).features
    if args.label_column is not None:
        return load_csv(args.data, args.label_column,
                        args.positive_label, args.header).features
    return load_matrix_csv(args.data, args.header)


def cmd_predict(args) -> int:
    model = load_model(args.model)
    x = _prediction_features(args, model)
    labels, d1, d2 = predict(model, x, return_distances=True)
    lines = ["row,label,dist1,dist2"]
    for i in range(labels.shape[0]):
        lines.append(f"{i},{labels[i]},{d1[i]:.17g},{d2[i]:.17g}")
    text = "\n".join(lines) + "\n"
    if args.out:
        atomic_write(args.out, text)
        print(f"wrote {labels.shape[0]} predictions to {args.out}")
    else:
        sys.stdout.write(text)
    return 0


def _short_config(model) -> str:
    cfg = model.config
    parts = [
        f"tau={cfg.tau:g}", f"gamma={cfg.fuzzy.gamma:g}",
        f"c1={cfg.c1:g}", f"c2={cfg.c2:g}", f"kernel={cfg.kernel}",
    ]
    if cfg.sigma is not None:
        parts.append(f"sigma={cfg.sigma:g}")
    return ";".join(parts)


def cmd_eval(args) -> int:
    model = load_model(args.model)
    ds = _load_labeled(args)
    pred = predict(model, ds.features)
    rep = report(confusion(ds.labels, pred), args.metric_convention)
    dataset_name = os.path.basename(args.data)
    print(format_report(rep, dataset=dataset_name,
                        config=_short_config(model)))
    if args.out:
        header = "dataset,config,acc,sen,spe,gmean,convention"
        line = csv_line(rep, dataset=dataset_name,
                        config=_short_config(model))
        atomic_write(args.out, header + "\n" + line + "\n")
    return 0


def cmd_subsample(args) -> int:
    ds = _load_labeled(args)
    scaling = minmax_fit(ds.features)
    xs = minmax_apply(scaling, ds.features)
    fuzzy = FuzzyParams(gamma=args.gamma, tnorm=args.tnorm,
                        implicator=args.implicator,
                        score_mode=args.score_mode)
    scores = positive_region_scores(xs, ds.labels, fuzzy, target_class=-1)
    kept = scores.scores >= args.tau
    lines = ["index,row,score,kept"]
    for i, (row, score) in enumerate(
            zip(scores.row_indices, scores.scores)):
        lines.append(f"{i},{int(row)},{score:.17g},{int(kept[i])}")
    text = "\n".join(lines) + "\n"
    print(f"{'index':>6} {'row':>6} {'score':>10} kept")
    for i, (row, score) in enumerate(
            zip(scores.row_indices, scores.scores)):
        mark = "yes" if kept[i] else "no"
        print(f"{i:>6} {int(row):>6} {score:>10.6f} {mark}")
    print(
        f"tau={args.tau:g}: kept {int(kept.sum())} of {kept.size} "
        "majority instances"
    )
    if args.out:
        atomic_write(args.out, text)
    return 0


_CV_OVERRIDES = (
    ("data", "data"), ("format", "format"),
    ("positive_label", "positive_label"),
    ("label_column", "label_column"), ("header", "header"),
    ("tau", "tau"), ("gamma", "gamma"), ("c1", "c1"), ("c2", "c2"),
    ("sigma", "sigma"), ("delta", "delta"), ("kernel", "kernel"),
    ("tnorm", "tnorm"), ("implicator", "implicator"),
    ("score_mode", "score_mode"), ("subsample", "subsample"),
    ("weights", "weights"), ("untie_c", "untie_c"),
    ("folds", "folds"), ("inner_folds", "inner_folds"),
    ("repeats", "repeats"), ("seed", "seed"),
    ("metric_convention", "convention"), ("workers", "workers"),
)


def cmd_cv(args) -> int:
    overrides = {}
    for attr, key in _CV_OVERRIDES:
        value = getattr(args, attr)
        if value is not None:
            overrides[key] = value
    config = parse_config(args.config, overrides)
    try:
        result = run_nested_cv(config)
    except ExperimentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        if args.out and exc.partial_records:
            partial = CvResult(
                records=exc.partial_records,
                aggregates=_aggregate(exc.partial_records),
                folds=config.folds, repeats=config.repeats,
                convention=config.convention, wall_time=0.0,
            )
            write_cv_result(partial, args.out)
            print(
                f"partial results ({len(exc.partial_records)} folds) "
                f"written to {args.out}",
                file=sys.stderr,
            )
        return 1
    print(format_cv_table(result))
    if args.out:
        write_cv_result(result, args.out)
        print(f"results written to {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="frlstsvm",
        description=(
            "Fuzzy-rough weighted least-squares twin SVM for imbalanced "
            "binary classification"
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="fit a model and save it")
    _add_data_flags(p)
    _add_fuzzy_flags(p)
    p.add_argument("--tau", type=float, default=0.0)
    p.add_argument("--c1", type=float, default=1.0)
    p.add_argument("--c2", type=float, default=1.0)
    p.add_argument("--delta", type=float, default=1e-6)
    p.add_argument("--kernel", choices=("linear", "gaussian"),
                   default="linear")
    p.add_argument("--sigma", type=float, default=None)
    p.add_argument("--no-subsample", action="store_true")
    p.add_argument("--no-weights", action="store_true")
    p.add_argument("--out", required=True, help="model file to write")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("predict", help="label new rows with a model")
    p.add_argument("--model", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--format", choices=("csv", "keel"), default="csv")
    p.add_argument("--positive-label", default=None)
    p.add_argument("--label-column", type=_column, default=None,
                   help="drop this CSV column before predicting")
    p.add_argument("--header", action="store_true")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("eval", help="score a model on labeled data")
    p.add_argument("--model", required=True)
    _add_data_flags(p)
    p.add_argument("--metric-convention",
                   choices=("standard", "paper_literal"),
                   default="standard")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser(
        "subsample",
        help="inspect majority positive-region scores at a threshold",
    )
    _add_data_flags(p)
    _add_fuzzy_flags(p)
    p.add_argument("--tau", type=float, required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_subsample)

    p = sub.add_parser("cv", help="nested repeated cross-validation")
    p.add_argument("--config", default=None, help="key = value file")
    p.add_argument("--data", default=None)
    p.add_argument("--format", choices=("csv", "keel"), default=None)
    p.add_argument("--positive-label", default=None,
                   dest="positive_label")
    p.add_argument("--label-column", default=None, dest="label_column")
    p.add_argument("--header", choices=("true", "false"), default=None)
    p.add_argument("--tau", default=None,
                   help="comma-separated grid, e.g. 0,0.2,0.4")
    p.add_argument("--gamma", default=None)
    p.add_argument("--c1", default=None)
    p.add_argument("--c2", default=None)
    p.add_argument("--sigma", default=None)
    p.add_argument("--delta", default=None)
    p.add_argument("--kernel", choices=("linear", "gaussian"),
                   default=None)
    p.add_argument("--tnorm", choices=T_NORMS, default=None)
    p.add_argument("--implicator", choices=IMPLICATORS, default=None)
    p.add_argument("--score-mode", type=_score_mode, default=None,
                   dest="score_mode")
    p.add_argument("--subsample", choices=("true", "false"),
                   default=None)
    p.add_argument("--weights", choices=("true", "false"), default=None)
    p.add_argument("--untie-c", choices=("true", "false"), default=None,
                   dest="untie_c")
    p.add_argument("--folds", default=None)
    p.add_argument("--inner-folds", default=None, dest="inner_folds")
    p.add_argument("--repeats", default=None)
    p.add_argument("--seed", default=None)
    p.add_argument("--metric-convention",
                   choices=("standard", "paper_literal"), default=None,
                   dest="metric_convention")
    p.add_argument("--workers", default=None)
    p.add_argument("--out", default=None, help=".csv or .jsonl results")
    p.set_defaults(func=cmd_cv)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FrlstsvmError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
