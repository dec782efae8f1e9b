"""Command-line front end.

Subcommands: train, predict, eval, cv, bench, demo, report-features.
Exit status 0 on success, 1 on runtime failure (message to stderr), 2 on
usage errors (argparse prints usage to stderr).  All randomness flows from
--seed through per-component derived seeds, so fixed-seed runs write
byte-identical model and trace files.
"""

from __future__ import annotations

import argparse
import csv
import glob as globmod
import sys
from pathlib import Path

import numpy as np

from . import baselines, cg_binary, evalharness, mc_simplex, plots, synth
from .dataset import (
    BinaryView,
    DataError,
    Dataset,
    load_csv,
    load_libsvm,
    standardize,
)
from .evalharness import GridSpec, MethodSpec, SplitSpec, error_rate
from .model_io import load_model, save_model, save_trace
from .weak import PoolConfig


class CliError(RuntimeError):
    """Anticipated runtime failure: message to stderr, exit status 1."""


def _load_dataset(args) -> Dataset:
    path = Path(args.data)
    if not path.exists():
        raise CliError(f"data file not found: {path}")
    fmt = args.format
    if fmt == "auto":
        fmt = "csv" if path.suffix.lower() == ".csv" else "libsvm"
    if fmt == "csv":
        label_column = args.label_column
        try:
            label_column = int(label_column)
        except (TypeError, ValueError):
            pass
        return load_csv(path, label_column=label_column, has_header=not args.no_header)
    return load_libsvm(path)


def _add_data_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--data", required=True, help="input data file")
    p.add_argument("--format", choices=["auto", "libsvm", "csv"], default="auto")
    p.add_argument("--label-column", default="label",
                   help="CSV label column name or 0-based index")
    p.add_argument("--no-header", action="store_true", help="CSV file has no header row")


def _add_train_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--method", choices=list(evalharness.METHODS), default="cgens")
    p.add_argument("--family", choices=["stump", "perceptron", "fourier"], default="stump")
    p.add_argument("--C", type=float, default=1.0, help="regularization trade-off")
    p.add_argument("--epsilon", type=float, default=1e-3, help="termination threshold")
    p.add_argument("--jmax", type=int, default=100, help="maximum iterations")
    p.add_argument("--pool-size", type=int, default=2000, help="candidates per iteration")
    p.add_argument("--sigma", type=float, default=1.0, help="bandwidth for cosine features")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--standardize", choices=["auto", "on", "off"], default="auto")


def _method_spec(args) -> MethodSpec:
    std = {"auto": None, "on": True, "off": False}[args.standardize]
    return MethodSpec(
        method=args.method,
        family=args.family,
        C=args.C,
        epsilon=args.epsilon,
        j_max=args.jmax,
        pool_size=args.pool_size,
        sigma=args.sigma,
        standardize=std,
    )


def cmd_train(args) -> int:
    data = _load_dataset(args)
    spec = _method_spec(args)
    scaler = None
    train_data = data
    if spec.wants_standardize:
        train_data, scaler = standardize(data)
    label_map = [data.raw_label_of(c) for c in range(1, data.class_count + 1)]
    pool = PoolConfig(family=args.family, pool_size=args.pool_size,
                      sigma=args.sigma, rng_seed=args.seed)
    if args.method == "cgens-sls":
        cfg = cg_binary.TrainConfig(C=args.C, epsilon=args.epsilon, j_max=args.jmax, pool=pool)
        model, records = mc_simplex.train_mc(train_data, cfg)
    elif args.method == "cgens":
        cfg = cg_binary.TrainConfig(C=args.C, epsilon=args.epsilon, j_max=args.jmax, pool=pool)
        model, records = cg_binary.train(BinaryView(train_data), cfg)
    else:
        model, records = baselines.train_adaboost(BinaryView(train_data), args.jmax)
    save_model(model, args.out, scaler=scaler, label_map=label_map)
    if args.trace:
        save_trace(records, args.trace)
    final_err = records[-1].train_error if records else float("nan")
    print(f"trained {args.method} with {len(records)} iterations, "
          f"train error {final_err:.4f}, model -> {args.out}")
    return 0


def _predict_raw(model, scaler, label_map, data: Dataset):
    """Raw-label predictions plus per-sample score columns."""
    X = data.features if scaler is None else scaler.apply(data.features)
    if isinstance(model, mc_simplex.MulticlassModel):
        scores, ids = mc_simplex.predict_mc_batch(model, X)
        columns = [f"score_{c}" for c in range(1, model.code.class_count + 1)]
        values = scores
    elif isinstance(model, baselines.AdaBoostModel):
        ids = np.where(baselines.predict_adaboost_batch(model, X) > 0, 1, 2)
        if len(model.learners):
            R = np.array([h.response(X) for h in model.learners])
            margins = model.weights @ R
        else:
            margins = np.zeros(X.shape[0])
        columns, values = ["margin"], margins[:, None]
    else:
        margins, signed = cg_binary.predict_batch(model, X)
        ids = np.where(signed > 0, 1, 2)
        columns, values = ["margin"], margins[:, None]
    if label_map is not None:
        raw = np.asarray(label_map, dtype=np.float64)[ids - 1]
    else:
        raw = ids.astype(np.float64)
    return columns, values, raw


def cmd_predict(args) -> int:
    model, scaler, label_map = _load_checked_model(args.model)
    data = _load_dataset(args)
    columns, values, raw = _predict_raw(model, scaler, label_map, data)
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns + ["label"])
        for i in range(len(raw)):
            writer.writerow([repr(float(v)) for v in values[i]] + [_fmt_label(raw[i])])
    print(f"wrote {len(raw)} predictions -> {args.out}")
    return 0


def _fmt_label(v: float) -> str:
    return str(int(v)) if float(v) == int(v) else repr(float(v))


def _load_checked_model(path):
    if not Path(path).exists():
        raise CliError(f"model file not found: {path}")
    return load_model(path)


def cmd_eval(args) -> int:
    model, scaler, label_map = _load_checked_model(args.model)
    data = _load_dataset(args)
    _, _, raw_pred = _predict_raw(model, scaler, label_map, data)
    actual = np.array([data.raw_label_of(int(c)) for c in data.labels])
    err = error_rate(raw_pred, actual)
    print(f"error rate: {err!r}")
    return 0


def cmd_cv(args) -> int:
    data = _load_dataset(args)
    spec = _method_spec(args)
    grid = GridSpec(
        c_values=tuple(float(v) for v in args.c_grid.split(",")),
        j_max_values=tuple(int(v) for v in args.jmax_grid.split(",")),
        folds=args.folds,
    )
    sel = evalharness.cv_select(data, grid, spec, seed=args.seed)
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["C", "j_max", "cv_error", "selected"])
        for c, jm, err in sel.table:
            mark = "*" if (c == sel.c and jm == sel.j_max) else ""
            writer.writerow([repr(c), jm, repr(err), mark])
    _cv_figure(sel, Path(args.out).with_suffix(".png"))
    print(f"selected C={sel.c:g}, j_max={sel.j_max} -> {args.out}")
    return 0


def _cv_figure(sel, path) -> None:
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(5.0, 3.5))
    by_c: dict[float, list[tuple[int, float]]] = {}
    for c, jm, err in sel.table:
        by_c.setdefault(c, []).append((jm, err))
    for c, rows in sorted(by_c.items()):
        rows.sort()
        ax.plot([r[0] for r in rows], [r[1] for r in rows], marker="o", label=f"C={c:g}")
    ax.scatter([sel.j_max], [min(e for c, j, e in sel.table if c == sel.c and j == sel.j_max)],
               marker="*", s=160, c="k", zorder=5, label="selected")
    ax.set_xlabel("iteration cap")
    ax.set_ylabel("cv error")
    ax.set_xscale("log")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def cmd_bench(args) -> int:
    data = _load_dataset(args)
    methods = []
    for method in args.methods.split(","):
        method = method.strip()
        if method not in evalharness.METHODS:
            raise CliError(f"unknown method {method!r} in --methods")
        methods.append(
            MethodSpec(method=method, family=args.family, C=args.C, epsilon=args.epsilon,
                       j_max=args.jmax, pool_size=args.pool_size, sigma=args.sigma)
        )
    splits = SplitSpec(rng_seed=args.seed, train_fraction=args.train_fraction)
    reports = evalharness.benchmark(data, methods, splits, repeats=args.repeats)
    evalharness.save_reports(reports, args.out)
    plots.benchmark_figure(reports, Path(args.out).with_suffix(".png"))
    print(evalharness.format_reports(reports))
    print(f"report -> {args.out}")
    return 0


def cmd_demo(args) -> int:
    if args.demo_name != "toy2d":
        raise CliError(f"unknown demo {args.demo_name!r}")
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    train_ds, test_ds = synth.circle_dataset(args.n, args.n, args.seed)
    view = BinaryView(train_ds)
    test_view = BinaryView(test_ds)

    cg_test_errors: list[float] = []

    def cg_monitor(_it, model):
        _, signed = cg_binary.predict_batch(model, test_ds.features)
        cg_test_errors.append(error_rate(signed, test_view.signed_labels))

    pool = PoolConfig(family="stump", rng_seed=args.seed)
    cfg = cg_binary.TrainConfig(C=args.C, epsilon=args.epsilon, j_max=args.jmax, pool=pool)
    cg_model, cg_records = cg_binary.train(view, cfg, monitor=cg_monitor)

    ada_test_errors: list[float] = []

    def ada_monitor(_it, model):
        signed = baselines.predict_adaboost_batch(model, test_ds.features)
        ada_test_errors.append(error_rate(signed, test_view.signed_labels))

    ada_model, ada_records = baselines.train_adaboost(view, args.jmax, monitor=ada_monitor)

    save_trace(cg_records, outdir / "cgens_trace.csv")
    save_trace(ada_records, outdir / "adaboost_trace.csv",
               record_type=baselines.AdaBoostRecord)

    # decision-function values on a grid, for the boundary figure and reuse
    lo = train_ds.features.min(axis=0) - 0.3
    hi = train_ds.features.max(axis=0) + 0.3
    gx = np.linspace(lo[0], hi[0], args.grid)
    gy = np.linspace(lo[1], hi[1], args.grid)
    GX, GY = np.meshgrid(gx, gy)
    pts = np.column_stack([GX.ravel(), GY.ravel()])
    cg_margins, _ = cg_binary.predict_batch(cg_model, pts)
    if len(ada_model.learners):
        R = np.array([h.response(pts) for h in ada_model.learners])
        ada_votes = ada_model.weights @ R
    else:
        ada_votes = np.zeros(len(pts))
    with open(outdir / "grid.csv", "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["x1", "x2", "cgens_margin", "adaboost_vote"])
        for p, cm, av in zip(pts, cg_margins, ada_votes):
            writer.writerow([repr(float(p[0])), repr(float(p[1])), repr(float(cm)),
                             repr(float(av))])

    plots.convergence_figure(
        {
            "cg-ensemble": {"train": [r.train_error for r in cg_records],
                            "test": cg_test_errors},
            "adaboost": {"train": [r.train_error for r in ada_records],
                         "test": ada_test_errors},
        },
        outdir / "convergence.png",
    )
    plots.boundary_figure(GX, GY, cg_margins.reshape(GX.shape),
                          train_ds.features, train_ds.labels, outdir / "boundary.png")

    cg_err = cg_test_errors[-1] if cg_test_errors else float("nan")
    ada_err = ada_test_errors[-1] if ada_test_errors else float("nan")
    print(f"toy2d: cg-ensemble test error {cg_err:.4f} "
          f"({len(cg_records)} iters), adaboost test error {ada_err:.4f} "
          f"({len(ada_records)} rounds); artifacts -> {outdir}")
    return 0


def cmd_report_features(args) -> int:
    paths = sorted(globmod.glob(args.models))
    if not paths:
        raise CliError(f"no model files match {args.models!r}")
    models = []
    for p in paths:
        model, _, _ = load_model(p)
        if isinstance(model, mc_simplex.MulticlassModel):
            model = cg_binary.EnsembleModel(model.learners,
                                            np.zeros(len(model.learners)), 0.0)
        elif isinstance(model, baselines.AdaBoostModel):
            model = cg_binary.EnsembleModel(list(model.learners), model.weights, 0.0)
        models.append(model)
    d = args.features
    if d is None:
        d = 1 + max((h.feature_index for m in models for h in m.learners), default=0)
    counts = cg_binary.feature_frequency(models, d)
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["feature_index", "count"])
        for j, c in enumerate(counts):
            writer.writerow([j, int(c)])
    plots.frequency_figure(counts, Path(args.out).with_suffix(".png"))
    print(f"feature frequencies over {len(models)} models -> {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cgens",
        description="Train and evaluate ensemble classifiers fitted by column generation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="train a model and write model + trace files")
    _add_data_options(p)
    _add_train_options(p)
    p.add_argument("--out", required=True, help="output model JSON path")
    p.add_argument("--trace", default=None, help="optional per-iteration trace CSV")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("predict", help="write per-sample scores and labels")
    p.add_argument("--model", required=True)
    _add_data_options(p)
    p.add_argument("--out", required=True, help="output predictions CSV")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("eval", help="print the error rate of a model on a dataset")
    p.add_argument("--model", required=True)
    _add_data_options(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("cv", help="cross-validated grid selection of C and j_max")
    _add_data_options(p)
    _add_train_options(p)
    p.add_argument("--c-grid", default="0.1,1,10", help="comma-separated C values")
    p.add_argument("--jmax-grid", default="25,50,100,250,500",
                   help="comma-separated iteration caps")
    p.add_argument("--folds", type=int, default=5)
    p.add_argument("--out", required=True, help="output grid report CSV")
    p.set_defaults(func=cmd_cv)

    p = sub.add_parser("bench", help="benchmark methods over repeated splits")
    _add_data_options(p)
    _add_train_options(p)
    p.add_argument("--methods", default="cgens,adaboost",
                   help="comma-separated subset of: " + ",".join(evalharness.METHODS))
    p.add_argument("--repeats", type=int, default=5)
    p.add_argument("--train-fraction", type=float, default=0.6)
    p.add_argument("--out", required=True, help="output report CSV")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("demo", help="run a built-in demonstration")
    p.add_argument("demo_name", choices=["toy2d"])
    p.add_argument("--n", type=int, default=500, help="samples per side (train and test)")
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--C", type=float, default=10.0)
    p.add_argument("--epsilon", type=float, default=1e-3)
    p.add_argument("--jmax", type=int, default=100)
    p.add_argument("--grid", type=int, default=120, help="decision-grid resolution per axis")
    p.add_argument("--outdir", default="toy2d_out")
    p.set_defaults(func=cmd_demo)

    p = sub.add_parser("report-features", help="stump selection frequencies across models")
    p.add_argument("--models", required=True, help="glob of model JSON files")
    p.add_argument("--features", type=int, default=None,
                   help="feature count (default: inferred from the models)")
    p.add_argument("--out", required=True, help="output frequency CSV")
    p.set_defaults(func=cmd_report_features)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (DataError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
