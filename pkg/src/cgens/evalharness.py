"""Error metrics, cross-validated model selection and benchmark orchestration.

A method is a named trainer configuration; the harness runs each one over
repeated stratified splits, reports mean and standard deviation of test
error, and times the training call (weak-learner search included).  A method
that raises is reported failed without aborting the others.
"""

from __future__ import annotations

import csv
import time
from dataclasses import dataclass, field, replace

import numpy as np

from . import baselines, cg_binary, mc_simplex
from .dataset import BinaryView, Dataset, SplitSpec, holdout_split, kfold, standardize, subset
from .weak import PoolConfig

METHODS = ("cgens", "cgens-sls", "adaboost")


@dataclass(frozen=True)
class MethodSpec:
    """One benchmark entry: a trainer id plus its hyperparameters."""

    method: str
    name: str | None = None
    family: str = "stump"
    C: float = 1.0
    epsilon: float = 1e-3
    j_max: int = 100
    pool_size: int = 2000
    sigma: float = 1.0
    standardize: bool | None = None  # None: on for sampled families, off for stumps

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")

    @property
    def label(self) -> str:
        return self.name if self.name is not None else f"{self.method}-{self.family}"

    @property
    def wants_standardize(self) -> bool:
        if self.standardize is not None:
            return self.standardize
        return self.family in ("perceptron", "fourier")


@dataclass(frozen=True)
class GridSpec:
    c_values: tuple = (0.1, 1.0, 10.0)
    j_max_values: tuple = (25, 50, 100, 250, 500)
    folds: int = 5

    def __post_init__(self):
        if not self.c_values or not self.j_max_values:
            raise ValueError("grids must be nonempty")


@dataclass
class EvalReport:
    method: str
    errors: list[float] = field(default_factory=list)
    train_seconds: list[float] = field(default_factory=list)
    failed: bool = False
    message: str = ""

    @property
    def mean_error(self) -> float:
        return float(np.mean(self.errors)) if self.errors else float("nan")

    @property
    def std_error(self) -> float:
        if len(self.errors) < 2:
            return 0.0 if self.errors else float("nan")
        return float(np.std(self.errors, ddof=1))

    @property
    def mean_seconds(self) -> float:
        return float(np.mean(self.train_seconds)) if self.train_seconds else float("nan")


def error_rate(predicted, actual) -> float:
    """Fraction of mismatched labels."""
    predicted = np.asarray(predicted)
    actual = np.asarray(actual)
    if predicted.shape != actual.shape:
        raise ValueError(f"length mismatch: {predicted.shape} vs {actual.shape}")
    return float(np.mean(predicted != actual))


def fit_and_predict(spec: MethodSpec, train: Dataset, test_X: np.ndarray, seed: int) -> np.ndarray:
    """Train per the spec and return predicted class ids (1..k) on test_X."""
    if spec.wants_standardize:
        train, scaler = standardize(train)
        test_X = scaler.apply(test_X)
    if spec.method == "cgens-sls":
        cfg = _train_config(spec, seed)
        model, _ = mc_simplex.train_mc(train, cfg)
        _, labels = mc_simplex.predict_mc_batch(model, test_X)
        return labels
    view = BinaryView(train)
    if spec.method == "cgens":
        cfg = _train_config(spec, seed)
        model, _ = cg_binary.train(view, cfg)
        _, signed = cg_binary.predict_batch(model, test_X)
    else:
        model, _ = baselines.train_adaboost(view, spec.j_max)
        signed = baselines.predict_adaboost_batch(model, test_X)
    return np.where(signed > 0, 1, 2)


def _train_config(spec: MethodSpec, seed: int) -> cg_binary.TrainConfig:
    pool = PoolConfig(family=spec.family, pool_size=spec.pool_size,
                      sigma=spec.sigma, rng_seed=seed)
    return cg_binary.TrainConfig(C=spec.C, epsilon=spec.epsilon, j_max=spec.j_max, pool=pool)


@dataclass
class CvSelection:
    c: float
    j_max: int
    table: list[tuple[float, int, float]]  # (C, j_max, mean fold error)


def cv_select(data: Dataset, grid: GridSpec, spec: MethodSpec, seed: int = 0) -> CvSelection:
    """Grid point minimizing mean stratified-CV error; ties prefer smaller
    j_max, then smaller C."""
    folds = kfold(data, SplitSpec(rng_seed=seed, fold_count=grid.folds))
    table = []
    for c in grid.c_values:
        for jm in grid.j_max_values:
            candidate = replace(spec, C=float(c), j_max=int(jm))
            fold_errors = []
            for fold_idx, (train_idx, test_idx) in enumerate(folds):
                train = subset(data, train_idx)
                test = subset(data, test_idx)
                pred = fit_and_predict(candidate, train, test.features, seed=seed + fold_idx)
                fold_errors.append(error_rate(pred, test.labels))
            table.append((float(c), int(jm), float(np.mean(fold_errors))))
    best = min(table, key=lambda row: (row[2], row[1], row[0]))
    return CvSelection(c=best[0], j_max=best[1], table=table)


def benchmark(
    data: Dataset,
    methods: list[MethodSpec],
    splits: SplitSpec,
    repeats: int = 5,
) -> list[EvalReport]:
    """Each method on each of `repeats` stratified splits; timing covers the
    training call only."""
    if repeats < 1:
        raise ValueError("repeats must be >= 1")
    reports = [EvalReport(method=spec.label) for spec in methods]
    for r in range(repeats):
        split = SplitSpec(rng_seed=splits.rng_seed + r, train_fraction=splits.train_fraction)
        train_idx, test_idx = holdout_split(data, split)
        train = subset(data, train_idx)
        test = subset(data, test_idx)
        for spec, report in zip(methods, reports):
            if report.failed:
                continue
            try:
                t0 = time.perf_counter()
                pred = fit_and_predict(spec, train, test.features, seed=splits.rng_seed + r)
                elapsed = time.perf_counter() - t0
                report.errors.append(error_rate(pred, test.labels))
                report.train_seconds.append(elapsed)
            except Exception as exc:  # quarantine, keep the other methods running
                report.failed = True
                report.message = f"{type(exc).__name__}: {exc}"
    return reports


def save_reports(reports: list[EvalReport], path) -> None:
    """CSV export: method, mean_err, std_err, mean_train_seconds, status."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["method", "mean_err", "std_err", "mean_train_seconds", "status"])
        for rep in reports:
            if rep.failed:
                writer.writerow([rep.method, "", "", "", f"failed: {rep.message}"])
            else:
                writer.writerow([rep.method, repr(rep.mean_error), repr(rep.std_error),
                                 repr(rep.mean_seconds), "ok"])


def format_reports(reports: list[EvalReport]) -> str:
    """Human-readable benchmark table."""
    lines = [f"{'method':<24} {'mean_err':>10} {'std_err':>10} {'train_s':>10}"]
    for rep in reports:
        if rep.failed:
            lines.append(f"{rep.method:<24} {'failed':>10}   {rep.message}")
        else:
            lines.append(
                f"{rep.method:<24} {rep.mean_error:>10.4f} {rep.std_error:>10.4f}"
                f" {rep.mean_seconds:>10.3f}"
            )
    return "\n".join(lines)
