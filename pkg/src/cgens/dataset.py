"""Dataset loading, validation, standardization and splitting.

Labels are remapped on load to contiguous class ids {1..k}, assigned by
ascending numeric order of the raw labels found in the file.  The raw values
are kept on the Dataset so predictions can be reported in the original label
space.  Features are stored dense: the weak-learner search scans full columns
and desk-scale data fits in memory.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np


class DataError(ValueError):
    """Malformed input data or an invalid split request."""


@dataclass(frozen=True, eq=False)
class Dataset:
    """Dense feature matrix with contiguous integer class labels.

    features : (m, d) float array, all entries finite
    labels   : (m,) int array with values in {1..k}, every class present
    class_count : k
    feature_names : optional list of d column names
    raw_labels : optional length-k array; raw_labels[c-1] is the original
        label value that was mapped to class id c
    """

    features: np.ndarray
    labels: np.ndarray
    class_count: int
    feature_names: list[str] | None = None
    raw_labels: np.ndarray | None = None

    def __post_init__(self):
        X = np.asarray(self.features, dtype=np.float64)
        y = np.asarray(self.labels, dtype=np.int64)
        object.__setattr__(self, "features", X)
        object.__setattr__(self, "labels", y)
        if X.ndim != 2 or X.shape[0] < 2 or X.shape[1] < 1:
            raise DataError(f"need an m x d matrix with m >= 2, d >= 1, got shape {X.shape}")
        if y.shape != (X.shape[0],):
            raise DataError("labels must be a length-m vector")
        if not np.all(np.isfinite(X)):
            raise DataError("features contain NaN or Inf")
        k = int(self.class_count)
        if k < 1:
            raise DataError("class_count must be positive")
        present = np.unique(y)
        if present.min() < 1 or present.max() > k or len(present) != k:
            raise DataError(f"labels must cover every class in 1..{k}, found {present.tolist()}")
        if self.feature_names is not None and len(self.feature_names) != X.shape[1]:
            raise DataError("feature_names length must equal d")

    @property
    def n_samples(self) -> int:
        return self.features.shape[0]

    @property
    def n_features(self) -> int:
        return self.features.shape[1]

    def raw_label_of(self, class_id: int) -> float:
        """Original label value for a contiguous class id (identity if unknown)."""
        if self.raw_labels is None:
            return float(class_id)
        return float(self.raw_labels[class_id - 1])


@dataclass(frozen=True, eq=False)
class BinaryView:
    """A two-class dataset with signed labels: class 1 -> +1, class 2 -> -1."""

    dataset: Dataset
    signed_labels: np.ndarray = field(init=False)

    def __post_init__(self):
        if self.dataset.class_count != 2:
            raise DataError(f"binary view needs exactly 2 classes, got {self.dataset.class_count}")
        signed = np.where(self.dataset.labels == 1, 1.0, -1.0)
        object.__setattr__(self, "signed_labels", signed)


@dataclass(frozen=True)
class SplitSpec:
    """Holdout fraction or fold count plus the seed that makes splits reproducible."""

    rng_seed: int
    train_fraction: float | None = None
    fold_count: int | None = None

    def __post_init__(self):
        if self.train_fraction is not None and not (0.0 < self.train_fraction < 1.0):
            raise DataError("train_fraction must lie in (0, 1)")
        if self.fold_count is not None and self.fold_count < 2:
            raise DataError("fold_count must be at least 2")


def _remap_labels(raw: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Map raw numeric labels to contiguous {1..k} by ascending raw value."""
    values = np.unique(raw)
    ids = np.searchsorted(values, raw) + 1
    return ids.astype(np.int64), values


def load_libsvm(path) -> Dataset:
    """Read a sparse `<label> <idx>:<val> ...` text file (1-based indices)."""
    rows: list[dict[int, float]] = []
    raw_labels: list[float] = []
    d = 0
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            try:
                label = float(parts[0])
            except ValueError:
                raise DataError(f"{path}:{lineno}: non-numeric label {parts[0]!r}")
            entries: dict[int, float] = {}
            prev_idx = 0
            for tok in parts[1:]:
                idx_s, _, val_s = tok.partition(":")
                if not val_s:
                    raise DataError(f"{path}:{lineno}: malformed entry {tok!r}")
                try:
                    idx = int(idx_s)
                    val = float(val_s)
                except ValueError:
                    raise DataError(f"{path}:{lineno}: non-numeric entry {tok!r}")
                if idx <= prev_idx:
                    raise DataError(f"{path}:{lineno}: indices must be 1-based strictly increasing")
                prev_idx = idx
                entries[idx] = val
            d = max(d, prev_idx)
            rows.append(entries)
            raw_labels.append(label)
    if not rows:
        raise DataError(f"{path}: empty file")
    X = np.zeros((len(rows), d), dtype=np.float64)
    for i, entries in enumerate(rows):
        for idx, val in entries.items():
            X[i, idx - 1] = val
    labels, values = _remap_labels(np.asarray(raw_labels))
    return Dataset(X, labels, class_count=len(values), raw_labels=values)


def save_libsvm(dataset: Dataset, path) -> None:
    """Write the sparse text format; zero entries are omitted, raw labels restored."""
    with open(path, "w", encoding="utf-8") as fh:
        for i in range(dataset.n_samples):
            raw = dataset.raw_label_of(int(dataset.labels[i]))
            cells = [_fmt_num(raw)]
            row = dataset.features[i]
            for j in np.nonzero(row)[0]:
                cells.append(f"{j + 1}:{_fmt_num(row[j])}")
            fh.write(" ".join(cells) + "\n")


def _fmt_num(x: float) -> str:
    # integers print without a trailing .0; floats use repr (shortest round-trip)
    if float(x) == int(x) and abs(x) < 1e15:
        return str(int(x))
    return repr(float(x))


def load_csv(path, label_column="label", has_header: bool = True) -> Dataset:
    """Read an RFC-4180-style CSV file.

    label_column may be a 0-based column index or, with a header, a name.
    Header names for the remaining columns become feature_names.
    """
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        table = [row for row in reader if row]
    if not table:
        raise DataError(f"{path}: empty file")
    header = None
    if has_header:
        header = table[0]
        table = table[1:]
        if not table:
            raise DataError(f"{path}: no data rows")
    width = len(table[0])
    for rownum, row in enumerate(table, start=1):
        if len(row) != width:
            raise DataError(f"{path}: ragged row {rownum} ({len(row)} cells, expected {width})")
    if isinstance(label_column, str):
        if header is None:
            raise DataError("label column given by name but file has no header")
        try:
            label_idx = header.index(label_column)
        except ValueError:
            raise DataError(f"unknown label column {label_column!r}")
    else:
        label_idx = int(label_column)
        if not (0 <= label_idx < width):
            raise DataError(f"label column index {label_idx} out of range for {width} columns")
    feat_idx = [j for j in range(width) if j != label_idx]
    X = np.empty((len(table), len(feat_idx)), dtype=np.float64)
    raw_labels = np.empty(len(table), dtype=np.float64)
    for i, row in enumerate(table):
        try:
            raw_labels[i] = float(row[label_idx])
        except ValueError:
            raise DataError(f"{path}: non-numeric label {row[label_idx]!r} in row {i + 1}")
        for col, j in enumerate(feat_idx):
            try:
                X[i, col] = float(row[j])
            except ValueError:
                raise DataError(f"{path}: non-numeric value {row[j]!r} in row {i + 1}")
    labels, values = _remap_labels(raw_labels)
    names = [header[j] for j in feat_idx] if header is not None else None
    return Dataset(X, labels, class_count=len(values), feature_names=names, raw_labels=values)


def save_csv(dataset: Dataset, path, label_column: str = "label") -> None:
    """Write CSV with raw labels in the last column; header only if names exist."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        if dataset.feature_names is not None:
            writer.writerow(list(dataset.feature_names) + [label_column])
        for i in range(dataset.n_samples):
            row = [_fmt_num(v) for v in dataset.features[i]]
            row.append(_fmt_num(dataset.raw_label_of(int(dataset.labels[i]))))
            writer.writerow(row)


@dataclass(frozen=True)
class Scaler:
    """Per-feature affine transform fitted on a training set."""

    mean: np.ndarray
    scale: np.ndarray

    def apply(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        return (X - self.mean) / self.scale


def standardize(train: Dataset) -> tuple[Dataset, Scaler]:
    """Zero-mean, unit-variance per feature; constant features map to 0 with scale 1."""
    X = train.features
    mean = X.mean(axis=0)
    std = X.std(axis=0)
    scale = np.where(std > 0.0, std, 1.0)
    scaler = Scaler(mean=mean, scale=scale)
    scaled = Dataset(
        scaler.apply(X),
        train.labels,
        train.class_count,
        feature_names=train.feature_names,
        raw_labels=train.raw_labels,
    )
    return scaled, scaler


def kfold(dataset: Dataset, spec: SplitSpec) -> list[tuple[np.ndarray, np.ndarray]]:
    """Stratified k-fold indices: per-class counts across folds differ by <= 1."""
    if spec.fold_count is None:
        raise DataError("kfold needs a SplitSpec with fold_count")
    k = spec.fold_count
    rng = np.random.default_rng(np.random.SeedSequence([spec.rng_seed, 0xF01D]))
    fold_members: list[list[int]] = [[] for _ in range(k)]
    offset = 0
    for cls in range(1, dataset.class_count + 1):
        idx = np.flatnonzero(dataset.labels == cls)
        if len(idx) < k:
            raise DataError(f"fold_count {k} exceeds size of class {cls} ({len(idx)})")
        idx = rng.permutation(idx)
        for pos, sample in enumerate(idx):
            # rotate the starting fold per class so fold sizes stay balanced
            fold_members[(pos + offset) % k].append(int(sample))
        offset += len(idx) % k
    splits = []
    all_idx = np.arange(dataset.n_samples)
    for f in range(k):
        test = np.sort(np.asarray(fold_members[f], dtype=np.int64))
        mask = np.ones(dataset.n_samples, dtype=bool)
        mask[test] = False
        splits.append((all_idx[mask], test))
    return splits


def holdout_split(dataset: Dataset, spec: SplitSpec) -> tuple[np.ndarray, np.ndarray]:
    """Stratified train/test split by spec.train_fraction, reproducible from the seed."""
    if spec.train_fraction is None:
        raise DataError("holdout_split needs a SplitSpec with train_fraction")
    rng = np.random.default_rng(np.random.SeedSequence([spec.rng_seed, 0x5B117]))
    train_parts, test_parts = [], []
    for cls in range(1, dataset.class_count + 1):
        idx = rng.permutation(np.flatnonzero(dataset.labels == cls))
        n_train = int(round(spec.train_fraction * len(idx)))
        n_train = min(max(n_train, 1), len(idx) - 1)  # keep every class on both sides
        train_parts.append(idx[:n_train])
        test_parts.append(idx[n_train:])
    train = np.sort(np.concatenate(train_parts))
    test = np.sort(np.concatenate(test_parts))
    return train, test


def subset(dataset: Dataset, indices: np.ndarray) -> Dataset:
    """Dataset restricted to the given sample indices (class ids preserved)."""
    return Dataset(
        dataset.features[indices],
        dataset.labels[indices],
        dataset.class_count,
        feature_names=dataset.feature_names,
        raw_labels=dataset.raw_labels,
    )
