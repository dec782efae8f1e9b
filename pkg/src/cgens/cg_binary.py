"""Binary ensemble training by column generation.

Each iteration prices the weak-learner family against the current dual
multipliers (u_i = y_i * alpha_i), appends the best response column to the
restricted master problem, and re-solves the restricted SVM, so every past
weight is re-optimized jointly (fully corrective).  Training stops when no
hypothesis scores above the termination threshold, at the iteration cap, or
when the pricer returns a column already in the model (a duplicate would ask
the solver for more accuracy than its tolerance supports).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .dataset import BinaryView
from .linsvm import SolverConfig, solve_restricted
from .weak import (
    DecisionStump,
    PoolConfig,
    WeakLearner,
    learners_equal,
    negated,
    response_column,
    sample_pool,
    select_from_pool,
    train_stump,
)


@dataclass(frozen=True)
class TrainConfig:
    C: float = 1.0
    epsilon: float = 1e-3
    j_max: int = 500
    pool: PoolConfig = field(default_factory=PoolConfig)
    alpha_init: float | None = None  # defaults to C/2
    solver_tol: float = 1e-6
    solver_max_passes: int = 10000

    def __post_init__(self):
        if not self.C > 0.0:
            raise ValueError("C must be positive")
        if not self.epsilon > 0.0:
            raise ValueError("epsilon must be positive")
        if self.j_max < 1:
            raise ValueError("j_max must be >= 1")
        a0 = self.initial_alpha
        if not (0.0 < a0 < self.C):
            raise ValueError("alpha_init must lie strictly inside (0, C)")

    @property
    def initial_alpha(self) -> float:
        return self.C / 2.0 if self.alpha_init is None else self.alpha_init


@dataclass
class EnsembleModel:
    """Ordered weak learners with their combination weights: F(x) = w.h(x) + b."""

    learners: list[WeakLearner]
    weights: np.ndarray
    bias: float
    family: str = "stump"

    def __post_init__(self):
        self.weights = np.asarray(self.weights, dtype=np.float64)
        if len(self.learners) != len(self.weights):
            raise ValueError("one weight per learner")
        if not np.all(np.isfinite(self.weights)) or not np.isfinite(self.bias):
            raise ValueError("weights must be finite")


@dataclass
class IterationRecord:
    iteration: int
    learner: str
    selection_score: float
    primal_obj: float
    dual_obj: float
    gap_sample: float
    train_error: float


def _describe(h: WeakLearner) -> str:
    if isinstance(h, DecisionStump):
        return f"stump(f={h.feature_index}, t={h.threshold:.6g}, p={h.polarity:+d})"
    return type(h).__name__


def price(
    u: np.ndarray, X: np.ndarray, pool_cfg: PoolConfig, iteration: int
) -> tuple[WeakLearner, np.ndarray, float]:
    """Best weak learner for weights u, its response column, and its score.

    The returned learner is negation-normalized so the score is nonnegative;
    the family being closed under sign flips makes the absolute-value
    selection equivalent to this signed one.  Sampled families draw a fresh
    pool each call from a per-iteration seed.
    """
    if pool_cfg.family == "stump":
        h, score = train_stump(u, X)
        return h, response_column(h, X), score
    pool = sample_pool(pool_cfg, X, rng_seed=_pool_seed(pool_cfg.rng_seed, iteration))
    h, signed = select_from_pool(pool, u, X)
    if signed < 0.0:
        h = negated(h)
    col = response_column(h, X)
    return h, col, float(u @ col)


def _pool_seed(seed: int, iteration: int) -> int:
    return int(np.random.SeedSequence([int(seed), int(iteration)]).generate_state(1)[0])


def train(
    view: BinaryView,
    cfg: TrainConfig,
    monitor: Callable[[int, EnsembleModel], None] | None = None,
) -> tuple[EnsembleModel, list[IterationRecord]]:
    """Column-generation training loop for a two-class problem."""
    X = view.dataset.features
    y = view.signed_labels
    m = X.shape[0]
    alpha = np.full(m, cfg.initial_alpha)
    solver_cfg = SolverConfig(C=cfg.C, tol=cfg.solver_tol, max_passes=cfg.solver_max_passes)
    solver_rng = np.random.default_rng(np.random.SeedSequence([cfg.pool.rng_seed, 0x50F7]))

    learners: list[WeakLearner] = []
    H = np.empty((cfg.j_max, m))
    records: list[IterationRecord] = []
    weights = np.zeros(0)
    bias = 0.0

    while len(learners) < cfg.j_max:
        it = len(learners)
        h, col, score = price(y * alpha, X, cfg.pool, it)
        if score < cfg.epsilon:
            break
        if any(learners_equal(h, prev) for prev in learners):
            break
        gap_sample = 0.5 * score * score
        learners.append(h)
        H[it] = col
        sol = solve_restricted(H[: it + 1], y, solver_cfg, warm_start=alpha, rng=solver_rng)
        alpha, weights, bias = sol.alpha, sol.w, float(sol.b)
        margins = weights @ H[: it + 1] + bias
        train_err = float(np.mean(np.where(margins >= 0.0, 1.0, -1.0) != y))
        records.append(
            IterationRecord(
                iteration=it + 1,
                learner=_describe(h),
                selection_score=score,
                primal_obj=sol.primal_obj,
                dual_obj=sol.dual_obj,
                gap_sample=gap_sample,
                train_error=train_err,
            )
        )
        if monitor is not None:
            monitor(it + 1, EnsembleModel(list(learners), weights.copy(), bias, cfg.pool.family))

    if not learners:
        # degenerate: nothing priced above epsilon; predict the majority class
        bias = 1.0 if float(y.sum()) >= 0.0 else -1.0
        weights = np.zeros(0)
    model = EnsembleModel(learners, weights, bias, family=cfg.pool.family)
    return model, records


def predict(model: EnsembleModel, x: np.ndarray) -> tuple[float, int]:
    """Margin and sign label (+1/-1, with sgn(0) = +1) for one sample."""
    margins, labels = predict_batch(model, np.asarray(x, dtype=np.float64)[None, :])
    return float(margins[0]), int(labels[0])


def predict_batch(model: EnsembleModel, X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Margins and sign labels for every row of X."""
    X = np.asarray(X, dtype=np.float64)
    if model.learners:
        R = np.array([response_column(h, X) for h in model.learners])
        margins = model.weights @ R + model.bias
    else:
        margins = np.full(X.shape[0], model.bias)
    labels = np.where(margins >= 0.0, 1, -1)
    return margins, labels


def feature_frequency(models: list[EnsembleModel], d: int) -> np.ndarray:
    """How often each feature index appears as a stump across the models."""
    counts = np.zeros(d, dtype=np.int64)
    for model in models:
        for h in model.learners:
            if not isinstance(h, DecisionStump):
                raise ValueError("feature frequencies are defined for stump models only")
            counts[h.feature_index] += 1
    return counts
