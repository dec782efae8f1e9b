"""Restricted linear SVM solved by dual coordinate descent.

The master problem restricted to the currently selected weak learners is an
ordinary linear SVM over their response columns.  The bias is handled by
augmenting the response matrix with a constant all-ones row, which
l2-regularizes b and drops the dual equality constraint, leaving a pure
box-constrained dual:

    max_a  1'a - 1/2 a' (K ∘ yy') a,   0 <= a <= C,   K = H'H + 11'

Coordinate descent with a random permutation per pass and a projected-
gradient stopping rule; warm starts make the per-iteration resolves cheap.
The weight vector is recovered from the stationarity condition
w_j = sum_i y_i a_i H_ji (the all-ones row yields b = sum_i y_i a_i).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class SolverConfig:
    C: float
    tol: float = 1e-6
    max_passes: int = 10000
    bias_mode: str = "augmented"

    def __post_init__(self):
        if not self.C > 0.0:
            raise ValueError("C must be positive")
        if not self.tol > 0.0:
            raise ValueError("tol must be positive")
        if self.bias_mode != "augmented":
            raise ValueError(f"unsupported bias_mode {self.bias_mode!r}")


@dataclass
class SvmSolution:
    alpha: np.ndarray  # (m,) in [0, C]
    w: np.ndarray      # (J,)
    b: float
    xi: np.ndarray     # (m,) nonnegative slacks
    primal_obj: float
    dual_obj: float
    converged: bool
    passes: int = 0


def solve_restricted(
    H: np.ndarray,
    y: np.ndarray,
    cfg: SolverConfig,
    warm_start: np.ndarray | None = None,
    rng: np.random.Generator | None = None,
) -> SvmSolution:
    """Solve the restricted SVM over response rows H (J x m) for labels y in {-1,+1}."""
    H = np.asarray(H, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if H.ndim != 2 or H.shape[0] < 1:
        raise ValueError("H must have at least one response row")
    m = H.shape[1]
    if y.shape != (m,):
        raise ValueError("label vector length must match H columns")
    if not (np.any(y > 0) and np.any(y < 0)):
        raise ValueError("both classes must be present")
    if rng is None:
        rng = np.random.default_rng(0)
    C = cfg.C

    haug = np.vstack([H, np.ones((1, m))])
    cols = np.ascontiguousarray(haug.T)      # row i = augmented response of sample i
    qdiag = np.einsum("ij,ij->i", cols, cols)

    if warm_start is None:
        alpha = np.zeros(m)
    else:
        alpha = np.clip(np.asarray(warm_start, dtype=np.float64), 0.0, C).copy()
    w_aug = haug @ (alpha * y)

    converged = False
    passes = 0
    for _ in range(cfg.max_passes):
        passes += 1
        worst = 0.0
        for i in rng.permutation(m):
            xi_row = cols[i]
            g = y[i] * float(w_aug @ xi_row) - 1.0
            a = alpha[i]
            if a <= 0.0:
                pg = min(g, 0.0)
            elif a >= C:
                pg = max(g, 0.0)
            else:
                pg = g
            if pg != 0.0:
                worst = max(worst, abs(pg))
                new_a = min(max(a - g / qdiag[i], 0.0), C)
                if new_a != a:
                    w_aug += ((new_a - a) * y[i]) * xi_row
                    alpha[i] = new_a
        if worst <= cfg.tol:
            converged = True
            break

    # exact reconstruction from the final multipliers
    w_aug = haug @ (alpha * y)
    w = w_aug[:-1]
    b = float(w_aug[-1])
    margins = y * (H.T @ w + b)
    xi = np.maximum(0.0, 1.0 - margins)
    primal = primal_objective(w, b, H, y, C)
    dual = dual_objective(alpha, H, y, C)
    return SvmSolution(alpha=alpha, w=w, b=b, xi=xi, primal_obj=primal, dual_obj=dual,
                       converged=converged, passes=passes)


def primal_objective(w: np.ndarray, b: float, H: np.ndarray, y: np.ndarray, C: float) -> float:
    """1/2 (||w||^2 + b^2) + C sum_i max(0, 1 - y_i (w'Phi(x_i) + b)).

    The b^2 term is the augmented-bias regularization; it keeps the primal
    and the box-constrained dual a weak-duality pair.
    """
    margins = y * (H.T @ w + b)
    xi = np.maximum(0.0, 1.0 - margins)
    return float(0.5 * (w @ w + b * b) + C * xi.sum())


def dual_objective(alpha: np.ndarray, H: np.ndarray, y: np.ndarray, C: float) -> float:
    """1'a - 1/2 a'(K ∘ yy')a with the augmented kernel K = H'H + 11'."""
    alpha = np.asarray(alpha, dtype=np.float64)
    if np.any(alpha < -1e-12) or np.any(alpha > C + 1e-12):
        raise ValueError("alpha outside the [0, C] box")
    ay = alpha * y
    v = H @ ay
    s = ay.sum()  # contribution of the all-ones bias row
    return float(alpha.sum() - 0.5 * (v @ v + s * s))


def unselected_gap_term(alpha: np.ndarray, y: np.ndarray, candidate_responses) -> float:
    """Duality-gap mass of columns outside the working set.

    For each candidate response column h the gap contribution is
    1/2 [sum_i y_i a_i h(x_i)]^2; the total over candidates is returned.
    """
    ay = np.asarray(alpha, dtype=np.float64) * np.asarray(y, dtype=np.float64)
    total = 0.0
    for resp in candidate_responses:
        s = float(ay @ np.asarray(resp, dtype=np.float64))
        total += 0.5 * s * s
    return total
