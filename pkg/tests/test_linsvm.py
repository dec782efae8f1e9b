import numpy as np
import pytest

from cgens.linsvm import (
    SolverConfig,
    dual_objective,
    primal_objective,
    solve_restricted,
    unselected_gap_term,
)


def projected_gradient_qp(H, y, C, iters=200000, tol=1e-10):
    """Independent reference for the box-constrained dual.

    Maximizes 1'a - 1/2 a'Qa over [0, C]^m with Q = (H'H + 11') ∘ yy' by
    plain projected gradient with a 1/L step.
    """
    haug = np.vstack([H, np.ones((1, H.shape[1]))])
    K = haug.T @ haug
    Q = K * np.outer(y, y)
    L = float(np.linalg.eigvalsh(Q)[-1])
    step = 1.0 / max(L, 1e-12)
    m = H.shape[1]
    a = np.zeros(m)
    for _ in range(iters):
        g = 1.0 - Q @ a
        new = np.clip(a + step * g, 0.0, C)
        if np.max(np.abs(new - a)) <= tol:
            a = new
            break
        a = new
    return a


def primal_from_alpha(alpha, H, y, C):
    w_aug = np.vstack([H, np.ones((1, H.shape[1]))]) @ (alpha * y)
    return primal_objective(w_aug[:-1], float(w_aug[-1]), H, y, C)


def random_instance(rng, m_max=20, j_max=3):
    m = int(rng.integers(4, m_max + 1))
    J = int(rng.integers(1, j_max + 1))
    H = rng.uniform(-1.0, 1.0, size=(J, m))
    y = np.where(rng.random(m) < 0.5, 1.0, -1.0)
    y[0], y[1] = 1.0, -1.0  # both classes present
    return H, y


class TestSolveRestricted:
    def test_symmetric_two_point_problem(self):
        H = np.array([[1.0, -1.0]])
        y = np.array([1.0, -1.0])
        sol = solve_restricted(H, y, SolverConfig(C=10.0))
        assert sol.converged
        assert abs(sol.w[0] - 1.0) <= 1e-4
        assert abs(sol.b) <= 1e-4
        assert np.all(sol.xi <= 1e-4)
        assert abs(sol.primal_obj - 0.5) <= 1e-4

    def test_box_constraint_exact(self):
        rng = np.random.default_rng(0)
        for _ in range(10):
            H, y = random_instance(rng)
            C = float(rng.choice([0.1, 1.0, 10.0]))
            sol = solve_restricted(H, y, SolverConfig(C=C))
            assert np.all(sol.alpha >= 0.0)
            assert np.all(sol.alpha <= C)

    def test_matches_projected_gradient_oracle(self):
        rng = np.random.default_rng(1)
        for _ in range(20):
            H, y = random_instance(rng)
            C = float(rng.choice([0.1, 1.0, 10.0]))
            sol = solve_restricted(H, y, SolverConfig(C=C))
            ref_alpha = projected_gradient_qp(H, y, C)
            ref_primal = primal_from_alpha(ref_alpha, H, y, C)
            assert sol.primal_obj <= ref_primal + 1e-4 * (1.0 + abs(ref_primal))
            assert abs(sol.primal_obj - ref_primal) <= 1e-4 * (1.0 + abs(ref_primal))

    def test_gap_small_at_convergence(self):
        rng = np.random.default_rng(2)
        for _ in range(10):
            H, y = random_instance(rng)
            sol = solve_restricted(H, y, SolverConfig(C=1.0))
            assert sol.primal_obj - sol.dual_obj <= 1e-4 * (1.0 + abs(sol.primal_obj))

    def test_kkt_reconstruction(self):
        rng = np.random.default_rng(3)
        H, y = random_instance(rng, m_max=15, j_max=3)
        sol = solve_restricted(H, y, SolverConfig(C=1.0))
        w_ref = H @ (sol.alpha * y)
        assert np.max(np.abs(sol.w - w_ref)) <= 1e-6
        assert abs(sol.b - float(np.sum(sol.alpha * y))) <= 1e-6

    def test_weak_duality_on_any_feasible_point(self):
        rng = np.random.default_rng(4)
        for _ in range(20):
            H, y = random_instance(rng)
            C = 2.0
            alpha = rng.uniform(0.0, C, size=H.shape[1])
            w_aug = np.vstack([H, np.ones((1, H.shape[1]))]) @ (alpha * y)
            p = primal_objective(w_aug[:-1], float(w_aug[-1]), H, y, C)
            d = dual_objective(alpha, H, y, C)
            assert p >= d - 1e-9

    def test_single_class_rejected(self):
        with pytest.raises(ValueError, match="classes"):
            solve_restricted(np.ones((1, 3)), np.ones(3), SolverConfig(C=1.0))

    def test_empty_model_rejected(self):
        with pytest.raises(ValueError):
            solve_restricted(np.empty((0, 3)), np.array([1.0, -1.0, 1.0]), SolverConfig(C=1.0))

    def test_warm_start_clipped_and_accepted(self):
        rng = np.random.default_rng(5)
        H, y = random_instance(rng)
        warm = rng.uniform(-3.0, 8.0, size=H.shape[1])  # outside the box on purpose
        sol = solve_restricted(H, y, SolverConfig(C=1.0), warm_start=warm)
        assert np.all(sol.alpha >= 0.0) and np.all(sol.alpha <= 1.0)
        assert sol.converged

    def test_nonconvergence_flagged(self):
        rng = np.random.default_rng(6)
        H, y = random_instance(rng, m_max=20)
        sol = solve_restricted(H, y, SolverConfig(C=10.0, tol=1e-14, max_passes=1))
        assert not sol.converged
        assert np.all(np.isfinite(sol.alpha))


class TestObjectives:
    def test_zero_alpha_dual_is_zero(self):
        H = np.ones((2, 4))
        y = np.array([1.0, -1.0, 1.0, -1.0])
        assert dual_objective(np.zeros(4), H, y, 1.0) == 0.0

    def test_zero_model_primal_is_cm(self):
        H = np.random.default_rng(7).uniform(-1, 1, size=(3, 6))
        y = np.array([1.0, -1.0] * 3)
        C = 2.5
        assert primal_objective(np.zeros(3), 0.0, H, y, C) == C * 6

    def test_alpha_outside_box_rejected(self):
        H = np.ones((1, 2))
        y = np.array([1.0, -1.0])
        with pytest.raises(ValueError):
            dual_objective(np.array([2.0, 0.0]), H, y, 1.0)


class TestGapTerm:
    def test_zero_alpha(self):
        y = np.array([1.0, -1.0])
        assert unselected_gap_term(np.zeros(2), y, [np.ones(2)]) == 0.0

    def test_single_candidate_direct_formula(self):
        rng = np.random.default_rng(8)
        alpha = rng.uniform(0, 1, 10)
        y = np.where(rng.random(10) < 0.5, 1.0, -1.0)
        resp = rng.uniform(-1, 1, 10)
        s = float(np.sum(y * alpha * resp))
        assert abs(unselected_gap_term(alpha, y, [resp]) - 0.5 * s * s) <= 1e-12

    def test_monotone_in_candidates(self):
        rng = np.random.default_rng(9)
        alpha = rng.uniform(0, 1, 8)
        y = np.where(rng.random(8) < 0.5, 1.0, -1.0)
        cands = [rng.uniform(-1, 1, 8) for _ in range(5)]
        prev = 0.0
        for i in range(1, 6):
            cur = unselected_gap_term(alpha, y, cands[:i])
            assert cur >= prev
            prev = cur


class TestWarmStartPerformance:
    def test_warm_resolve_not_slower_than_cold(self):
        """Informational performance report: at each step of a column-growing
        run, resolve warm (previous multipliers) and cold and compare passes.
        Per-instance counts are noisy on easy steps, so the hard assertion is
        on the aggregate; the per-instance fraction is printed.
        """
        from cgens.weak import train_stump

        pairs = []
        for seed in range(6):
            rng = np.random.default_rng(seed)
            m = 50
            X = rng.standard_normal((m, 3))
            y = np.where(rng.random(m) < 0.5, 1.0, -1.0)
            y[0], y[1] = 1.0, -1.0
            cfg = SolverConfig(C=10.0)
            alpha = np.full(m, 5.0)
            cols = []
            for _ in range(8):
                h, score = train_stump(y * alpha, X)
                col = h.response(X)
                if score < 1e-3 or any(np.array_equal(col, c) for c in cols):
                    break
                cols.append(col)
                H = np.array(cols)
                warm = solve_restricted(H, y, cfg, warm_start=alpha,
                                        rng=np.random.default_rng(123))
                cold = solve_restricted(H, y, cfg, rng=np.random.default_rng(123))
                pairs.append((warm.passes, cold.passes))
                alpha = warm.alpha
        wins = sum(w <= c for w, c in pairs)
        warm_total = sum(w for w, _ in pairs)
        cold_total = sum(c for _, c in pairs)
        print(f"warm no slower on {wins}/{len(pairs)} resolves; "
              f"total passes warm {warm_total} vs cold {cold_total}")
        assert warm_total <= cold_total
