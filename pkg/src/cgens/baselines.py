"""Discrete AdaBoost with decision stumps, the stage-wise comparison baseline."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .dataset import BinaryView
from .weak import DecisionStump, response_column, train_stump

STAGE_CAP = 0.5 * np.log(1e12)  # stage weight for a perfectly separating stump


@dataclass
class AdaBoostModel:
    learners: list[DecisionStump]
    weights: np.ndarray  # positive stage values

    def __post_init__(self):
        self.weights = np.asarray(self.weights, dtype=np.float64)


@dataclass
class AdaBoostRecord:
    iteration: int
    weighted_error: float
    stage_weight: float
    train_error: float


def train_adaboost(
    view: BinaryView,
    rounds: int,
    monitor: Callable[[int, AdaBoostModel], None] | None = None,
) -> tuple[AdaBoostModel, list[AdaBoostRecord]]:
    """Sample-reweighting boosting: stumps fit to minimize weighted 0-1 error.

    Stops early when a stump separates perfectly (capped stage weight) or when
    no stump beats weighted error 1/2.
    """
    if rounds < 1:
        raise ValueError("rounds must be >= 1")
    X = view.dataset.features
    y = view.signed_labels
    m = X.shape[0]
    dist = np.full(m, 1.0 / m)
    learners: list[DecisionStump] = []
    stages: list[float] = []
    records: list[AdaBoostRecord] = []
    agg = np.zeros(m)  # running weighted vote on the training set

    for t in range(rounds):
        # maximizing |sum_i D_i y_i h(x_i)| over the negation-complete stump
        # family is the same as minimizing the weighted error
        stump, _ = train_stump(dist * y, X)
        resp = response_column(stump, X)
        err = float(dist[resp != y].sum())
        if err >= 0.5:
            break
        if err == 0.0:
            stage = STAGE_CAP
            stop = True
        else:
            stage = 0.5 * np.log((1.0 - err) / err)
            stop = False
        learners.append(stump)
        stages.append(float(stage))
        agg = agg + stage * resp
        train_err = float(np.mean(np.where(agg >= 0.0, 1.0, -1.0) != y))
        records.append(AdaBoostRecord(t + 1, err, float(stage), train_err))
        if monitor is not None:
            monitor(t + 1, AdaBoostModel(list(learners), np.asarray(stages)))
        if stop:
            break
        dist = dist * np.exp(-stage * y * resp)
        dist /= dist.sum()

    return AdaBoostModel(learners, np.asarray(stages)), records


def predict_adaboost(model: AdaBoostModel, x: np.ndarray) -> int:
    """Sign of the weighted vote for one sample (sgn(0) = +1)."""
    return int(predict_adaboost_batch(model, np.asarray(x, dtype=np.float64)[None, :])[0])


def predict_adaboost_batch(model: AdaBoostModel, X: np.ndarray) -> np.ndarray:
    """Sign labels (+1/-1) for every row of X."""
    X = np.asarray(X, dtype=np.float64)
    if len(model.learners) == 0:
        return np.ones(X.shape[0], dtype=np.int64)
    R = np.array([response_column(h, X) for h in model.learners])
    votes = model.weights @ R
    return np.where(votes >= 0.0, 1, -1)
