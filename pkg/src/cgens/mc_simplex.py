"""Multi-class ensembles on simplex-coded labels with a least-squares master.

The k class labels are embedded as k maximally separated unit vectors in
R^(k-1) (pairwise inner products -1/(k-1), zero sum).  The restricted master
problem is a least-squares SVM fitting the k-1 classifier outputs to the
coded labels; its solution is closed form,

    b = (1'S^-1 L / 1'S^-1 1)',   U = S^-1 (L - 1 b'),   w_tau = H U[:, tau],

with S = H'H + I/C kept inverted incrementally by a rank-one (Sherman-
Morrison) update as response rows are appended.  Pricing scans all k-1
dual columns and picks the best (hypothesis, column) pair; decoding assigns
the class whose code has the largest inner product with the output vector.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .cg_binary import TrainConfig, _describe, _pool_seed
from .dataset import Dataset
from .weak import (
    WeakLearner,
    learners_equal,
    negated,
    response_column,
    sample_pool,
    select_from_pool,
    train_stump,
)

SINV_RECOMPUTE_EVERY = 50  # bound floating-point drift of the rank-one recursion


@dataclass(frozen=True)
class SimplexCode:
    """k unit code vectors in R^(k-1), one row per class."""

    codes: np.ndarray
    class_count: int


def simplex_codes(class_count: int) -> SimplexCode:
    """Deterministic recursive construction of the k-vertex simplex code."""
    if class_count < 2:
        raise ValueError("need at least 2 classes")
    return SimplexCode(_codes(class_count), class_count)


def _codes(k: int) -> np.ndarray:
    if k == 2:
        return np.array([[1.0], [-1.0]])
    l = k - 1
    prev = _codes(k - 1)
    out = np.zeros((k, l))
    out[0, 0] = 1.0
    out[1:, 0] = -1.0 / l
    out[1:, 1:] = np.sqrt(1.0 - 1.0 / l**2) * prev
    return out


def label_matrix(labels: np.ndarray, code: SimplexCode) -> np.ndarray:
    """m x (k-1) matrix whose row i is the code vector of sample i's class."""
    labels = np.asarray(labels)
    if labels.min() < 1 or labels.max() > code.class_count:
        raise ValueError("label outside 1..k")
    return code.codes[labels - 1]


def sls_solve(H: np.ndarray, Sinv: np.ndarray, L: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Closed-form restricted least-squares solve given S^-1.

    Returns (b, U, W) with b the per-classifier biases, U the dual matrix and
    W the J x (k-1) stacked weight columns.
    """
    H = np.asarray(H, dtype=np.float64)
    Sinv = np.asarray(Sinv, dtype=np.float64)
    L = np.asarray(L, dtype=np.float64)
    m = L.shape[0]
    if Sinv.shape != (m, m):
        raise ValueError("S^-1 must be m x m")
    if H.size and H.shape[1] != m:
        raise ValueError("H columns must match sample count")
    s1 = Sinv @ np.ones(m)
    b = (s1 @ L) / s1.sum()
    U = Sinv @ (L - b[None, :])
    W = H.reshape(-1, m) @ U
    return b, U, W


def sinv_update(Sinv: np.ndarray, h_new: np.ndarray) -> np.ndarray:
    """Inverse of S + h h' from the inverse of S (rank-one downdate of S^-1)."""
    h = np.asarray(h_new, dtype=np.float64)
    if not np.all(np.isfinite(h)):
        raise ValueError("update vector contains NaN or Inf")
    s = Sinv @ h
    out = Sinv - np.outer(s, s) / (1.0 + h @ s)
    return 0.5 * (out + out.T)  # re-enforce symmetry


def sls_objective(H: np.ndarray, W: np.ndarray, b: np.ndarray, L: np.ndarray, C: float) -> float:
    """Regularized residual objective 1/2 sum ||w_tau||^2 + C/2 sum O^2."""
    m = L.shape[0]
    O = L - H.reshape(-1, m).T @ W - b[None, :]
    return float(0.5 * np.sum(W * W) + 0.5 * C * np.sum(O * O))


def select_weak_mc(
    U: np.ndarray,
    X: np.ndarray,
    pool: list[WeakLearner] | None = None,
) -> tuple[WeakLearner, int, float]:
    """Best (hypothesis, classifier column) pair over all k-1 dual columns.

    With pool=None the stump family is searched exactly; otherwise the given
    pool is scanned.  The winner is negation-normalized so the returned score
    |sum_i U[i, tau*] h(x_i)| is nonnegative; ties break toward the lowest
    column index.
    """
    U = np.asarray(U, dtype=np.float64)
    if not np.all(np.isfinite(U)):
        raise ValueError("dual matrix contains NaN or Inf")
    best: tuple[WeakLearner, int, float] | None = None
    for tau in range(U.shape[1]):
        u = U[:, tau]
        if pool is None:
            h, score = train_stump(u, X)
        else:
            h, score = select_from_pool(pool, u, X)
            if score < 0.0:
                h = negated(h)
                score = float(u @ response_column(h, X))
        if best is None or score > best[2]:
            best = (h, tau, score)
    assert best is not None
    return best


@dataclass
class MulticlassModel:
    """k-1 jointly trained classifiers plus the simplex code used to decode."""

    learners: list[WeakLearner]
    weight_matrix: np.ndarray  # (J, k-1)
    biases: np.ndarray         # (k-1,)
    code: SimplexCode
    family: str = "stump"


@dataclass
class McIterationRecord:
    iteration: int
    learner: str
    tau_star: int
    selection_score: float
    objective: float
    train_error: float


def train_mc(
    data: Dataset,
    cfg: TrainConfig,
    monitor: Callable[[int, "MulticlassModel"], None] | None = None,
) -> tuple[MulticlassModel, list[McIterationRecord]]:
    """Column-generation loop on the simplex least-squares master problem."""
    if data.class_count < 2:
        raise ValueError("need at least 2 classes")
    X = data.features
    m = X.shape[0]
    code = simplex_codes(data.class_count)
    L = label_matrix(data.labels, code)

    # J = 0 closed form: S^-1 = C I, so b is the column mean of L and
    # U = C (L - 1 b').  A literal constant U would score every column and
    # every label identically, which prices nothing useful.
    Sinv = cfg.C * np.eye(m)
    b, U, W = sls_solve(np.empty((0, m)), Sinv, L)

    learners: list[WeakLearner] = []
    H = np.empty((cfg.j_max, m))
    records: list[McIterationRecord] = []

    while len(learners) < cfg.j_max:
        it = len(learners)
        if cfg.pool.family == "stump":
            pool = None
        else:
            pool = sample_pool(cfg.pool, X, rng_seed=_pool_seed(cfg.pool.rng_seed, it))
        h, tau_star, score = select_weak_mc(U, X, pool=pool)
        if score < cfg.epsilon:
            break
        if any(learners_equal(h, prev) for prev in learners):
            break
        col = response_column(h, X)
        learners.append(h)
        H[it] = col
        if (it + 1) % SINV_RECOMPUTE_EVERY == 0:
            Hj = H[: it + 1]
            Sinv = np.linalg.inv(Hj.T @ Hj + np.eye(m) / cfg.C)
            Sinv = 0.5 * (Sinv + Sinv.T)
        else:
            Sinv = sinv_update(Sinv, col)
        b, U, W = sls_solve(H[: it + 1], Sinv, L)
        objective = sls_objective(H[: it + 1], W, b, L, cfg.C)
        scores = (H[: it + 1].T @ W + b[None, :]) @ code.codes.T
        train_err = float(np.mean(np.argmax(scores, axis=1) + 1 != data.labels))
        records.append(
            McIterationRecord(
                iteration=it + 1,
                learner=_describe(h),
                tau_star=tau_star + 1,
                selection_score=score,
                objective=objective,
                train_error=train_err,
            )
        )
        if monitor is not None:
            monitor(it + 1, MulticlassModel(list(learners), W.copy(), b.copy(), code, cfg.pool.family))

    W = W if learners else np.empty((0, code.class_count - 1))
    model = MulticlassModel(learners, W, b, code, family=cfg.pool.family)
    return model, records


def predict_mc(model: MulticlassModel, x: np.ndarray) -> tuple[np.ndarray, int]:
    """Per-class scores <F(x), c_y> and the argmax label (ties -> lowest id)."""
    scores, labels = predict_mc_batch(model, np.asarray(x, dtype=np.float64)[None, :])
    return scores[0], int(labels[0])


def predict_mc_batch(model: MulticlassModel, X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Scores (n x k) and decoded labels (1..k) for every row of X."""
    X = np.asarray(X, dtype=np.float64)
    if model.learners:
        R = np.array([response_column(h, X) for h in model.learners])
        F = R.T @ model.weight_matrix + model.biases[None, :]
    else:
        F = np.tile(model.biases, (X.shape[0], 1))
    scores = F @ model.code.codes.T
    labels = np.argmax(scores, axis=1) + 1
    return scores, labels
