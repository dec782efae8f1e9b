"""Synthetic datasets for demos and sanity checks."""

from __future__ import annotations

import numpy as np

from .dataset import Dataset


def circle_dataset(n_train: int, n_test: int, seed: int) -> tuple[Dataset, Dataset]:
    """Two-class 2D toy data: Gaussian cloud split by a circle.

    Points are drawn from a standard 2D Gaussian; those within the median
    norm are class 1, the rest class 2, so the classes are balanced and the
    true boundary is a circle no single axis-aligned cut can match.
    """
    rng = np.random.default_rng(np.random.SeedSequence([int(seed), 0xC19C1E]))
    X = rng.standard_normal((n_train + n_test, 2))
    radius = float(np.median(np.linalg.norm(X, axis=1)))
    labels = np.where(np.linalg.norm(X, axis=1) <= radius, 1, 2)
    raw = np.array([1.0, 2.0])
    train = Dataset(X[:n_train], labels[:n_train], 2, raw_labels=raw)
    test = Dataset(X[n_train:], labels[n_train:], 2, raw_labels=raw)
    return train, test


def blobs_dataset(
    n_train: int,
    n_test: int,
    seed: int,
    centers: np.ndarray | None = None,
    spread: float = 1.0,
) -> tuple[Dataset, Dataset]:
    """Well-separated Gaussian blobs, one per class, axis-separable by default."""
    if centers is None:
        centers = np.array([[0.0, 0.0], [6.0, 0.0], [0.0, 6.0]])
    centers = np.asarray(centers, dtype=np.float64)
    k = centers.shape[0]
    rng = np.random.default_rng(np.random.SeedSequence([int(seed), 0xB10B5]))
    n_total = n_train + n_test
    labels = 1 + (np.arange(n_total) % k)  # balanced classes
    X = centers[labels - 1] + spread * rng.standard_normal((n_total, centers.shape[1]))
    perm = rng.permutation(n_total)
    X, labels = X[perm], labels[perm]
    train = Dataset(X[:n_train], labels[:n_train], k)
    test = Dataset(X[n_train:], labels[n_train:], k)
    return train, test
