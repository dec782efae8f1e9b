"""Weak-learner families and the pricing subroutine.

Three hypothesis families, all with responses bounded in [-1, +1] and closed
under negation (exactly for stumps and cosine features, up to the sgn(0)=+1
tie convention for perceptrons):

  * decision stump       polarity * sgn(x[f] - threshold)
  * random perceptron    sgn(theta . x - kappa), theta on the unit sphere
  * cosine feature       cos(theta . x - kappa), Gaussian-sampled frequency

Pricing finds the hypothesis whose response column is farthest from
orthogonal to a signed weight vector u, i.e. maximizes |sum_i u_i h(x_i)|.
For stumps the search is exact over every feature, every midpoint threshold
and both polarities; for the sampled families it scans a finite pool.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

SGN_ZERO = 1.0  # sgn(0) = +1 everywhere, for reproducibility


@dataclass(frozen=True)
class DecisionStump:
    feature_index: int
    threshold: float
    polarity: int  # +1 or -1

    def response(self, X: np.ndarray) -> np.ndarray:
        col = X[:, self.feature_index]
        return np.where(col >= self.threshold, float(self.polarity), -float(self.polarity))


@dataclass(frozen=True, eq=False)
class PerceptronLearner:
    direction: np.ndarray  # unit 2-norm
    offset: float

    def response(self, X: np.ndarray) -> np.ndarray:
        proj = X @ self.direction - self.offset
        return np.where(proj >= 0.0, 1.0, -1.0)


@dataclass(frozen=True, eq=False)
class FourierLearner:
    frequency: np.ndarray
    phase: float

    def response(self, X: np.ndarray) -> np.ndarray:
        return np.cos(X @ self.frequency - self.phase)


WeakLearner = DecisionStump | PerceptronLearner | FourierLearner

FAMILIES = ("stump", "perceptron", "fourier")


@dataclass(frozen=True)
class PoolConfig:
    """Candidate-pool sampling parameters for one weak-learner family."""

    family: str = "stump"
    pool_size: int = 2000
    sigma: float = 1.0  # Gaussian bandwidth, fourier only
    rng_seed: int = 0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.pool_size < 1:
            raise ValueError("pool_size must be >= 1")
        if self.family == "fourier" and not self.sigma > 0.0:
            raise ValueError("sigma must be positive for the fourier family")


def response_column(h: WeakLearner, X: np.ndarray) -> np.ndarray:
    """Evaluate one weak learner on every row of X."""
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    d = X.shape[1]
    if isinstance(h, DecisionStump):
        if not (0 <= h.feature_index < d):
            raise ValueError(f"stump feature index {h.feature_index} out of range for d={d}")
    elif isinstance(h, PerceptronLearner):
        if h.direction.shape != (d,):
            raise ValueError("perceptron direction dimension mismatch")
    elif isinstance(h, FourierLearner):
        if h.frequency.shape != (d,):
            raise ValueError("fourier frequency dimension mismatch")
    else:
        raise TypeError(f"not a weak learner: {type(h).__name__}")
    return h.response(X)


def negated(h: WeakLearner) -> WeakLearner:
    """The sign-flipped member of the same family.

    Exact for stumps (polarity flip) and cosine features (phase shift by pi);
    for perceptrons the flip differs only on the measure-zero set where the
    projection hits the offset exactly.
    """
    if isinstance(h, DecisionStump):
        return DecisionStump(h.feature_index, h.threshold, -h.polarity)
    if isinstance(h, PerceptronLearner):
        return PerceptronLearner(-h.direction, -h.offset)
    if isinstance(h, FourierLearner):
        return FourierLearner(h.frequency, float(np.mod(h.phase - np.pi, 2.0 * np.pi)))
    raise TypeError(f"not a weak learner: {type(h).__name__}")


def learners_equal(a: WeakLearner, b: WeakLearner) -> bool:
    """Bitwise parameter equality (the duplicate-column guard)."""
    if type(a) is not type(b):
        return False
    if isinstance(a, DecisionStump):
        return (a.feature_index, a.threshold, a.polarity) == (b.feature_index, b.threshold, b.polarity)
    if isinstance(a, PerceptronLearner):
        return a.offset == b.offset and np.array_equal(a.direction, b.direction)
    return a.phase == b.phase and np.array_equal(a.frequency, b.frequency)


def train_stump(u: np.ndarray, X: np.ndarray) -> tuple[DecisionStump, float]:
    """Exact stump maximizing |sum_i u_i h(x_i)|.

    Thresholds are midpoints of consecutive distinct sorted feature values
    plus one sentinel below the minimum; this finite set contains a maximizer
    of the piecewise-constant objective.  The returned score is the signed
    sum of the returned stump, made nonnegative by the polarity choice.
    Ties break toward the lowest feature index, lowest threshold, polarity +1.
    Cost: one O(m log m) sort then an O(m) prefix-sum scan per feature.
    """
    X = np.asarray(X, dtype=np.float64)
    u = np.asarray(u, dtype=np.float64)
    if not np.all(np.isfinite(u)):
        raise ValueError("weights contain NaN or Inf")
    m, d = X.shape
    order = np.argsort(X, axis=0, kind="stable")
    xs = np.take_along_axis(X, order, axis=0)
    us = u[order]
    total = u.sum()

    # score of (threshold before sorted position t, polarity +1) is
    # total - 2 * sum(us[:t]); t = 0 is the sentinel below the minimum
    prefix = np.vstack([np.zeros((1, d)), np.cumsum(us, axis=0)[:-1]])
    scores = total - 2.0 * prefix
    valid = np.vstack([np.ones((1, d), dtype=bool), xs[1:] > xs[:-1]])
    abs_scores = np.where(valid, np.abs(scores), -1.0)

    best_t = np.argmax(abs_scores, axis=0)  # first max = lowest threshold
    per_feature = abs_scores[best_t, np.arange(d)]
    f = int(np.argmax(per_feature))  # first max = lowest feature index
    t = int(best_t[f])
    if t == 0:
        threshold = float(xs[0, f] - 1.0)
    else:
        a, b = float(xs[t - 1, f]), float(xs[t, f])
        threshold = 0.5 * (a + b)
        if threshold <= a:  # adjacent floats: the upper value itself splits them
            threshold = b
    polarity = 1 if scores[t, f] >= 0.0 else -1
    stump = DecisionStump(f, threshold, polarity)
    # recompute through the response so the reported score matches an
    # independent evaluation bit for bit
    score = float(u @ stump.response(X))
    return stump, score


def sample_pool(config: PoolConfig, X: np.ndarray, rng_seed: int | None = None) -> list[WeakLearner]:
    """Draw a candidate pool for the sampled families, deterministic in the seed.

    Perceptrons: direction uniform on the unit sphere, offset uniform over the
    range of that direction's projections on the training set (so no candidate
    is constant on it).  Cosine features: frequency i.i.d. Gaussian with
    per-coordinate standard deviation 1/sigma, phase uniform on [0, 2*pi).
    """
    X = np.asarray(X, dtype=np.float64)
    if X.size == 0:
        raise ValueError("cannot sample a pool for empty data")
    if config.family == "stump":
        raise ValueError("the stump family is searched exactly, not sampled")
    seed = config.rng_seed if rng_seed is None else rng_seed
    rng = np.random.default_rng(np.random.SeedSequence([int(seed), 0x9001]))
    n, d = config.pool_size, X.shape[1]
    if config.family == "perceptron":
        theta = rng.standard_normal((n, d))
        norms = np.linalg.norm(theta, axis=1)
        norms[norms == 0.0] = 1.0
        theta /= norms[:, None]
        proj = X @ theta.T  # (m, n)
        lo, hi = proj.min(axis=0), proj.max(axis=0)
        kappa = rng.uniform(lo, hi)
        return [PerceptronLearner(theta[j].copy(), float(kappa[j])) for j in range(n)]
    theta = rng.standard_normal((n, d)) / config.sigma
    kappa = rng.uniform(0.0, 2.0 * np.pi, size=n)
    return [FourierLearner(theta[j].copy(), float(kappa[j])) for j in range(n)]


def select_from_pool(
    pool: list[WeakLearner], u: np.ndarray, X: np.ndarray
) -> tuple[WeakLearner, float]:
    """Pool member maximizing |sum_i u_i h(x_i)| and its signed score.

    Ties break toward the lowest pool index.
    """
    if not pool:
        raise ValueError("empty pool")
    u = np.asarray(u, dtype=np.float64)
    scores = np.array([float(u @ response_column(h, X)) for h in pool])
    j = int(np.argmax(np.abs(scores)))
    return pool[j], float(scores[j])
