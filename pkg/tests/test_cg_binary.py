import numpy as np
import pytest

from cgens.cg_binary import (
    EnsembleModel,
    TrainConfig,
    feature_frequency,
    predict,
    predict_batch,
    train,
)
from cgens.dataset import BinaryView, Dataset
from cgens.linsvm import SolverConfig, solve_restricted, unselected_gap_term
from cgens.model_io import model_from_document, model_to_document
from cgens.weak import DecisionStump, FourierLearner, PoolConfig, response_column, train_stump

from test_weak import stump_candidates


def random_binary_dataset(rng, m=24, d=3):
    X = rng.standard_normal((m, d))
    labels = 1 + (np.arange(m) % 2)
    return Dataset(X, rng.permutation(labels), 2)


class TestTrainLoop:
    def test_huge_epsilon_terminates_at_zero(self):
        rng = np.random.default_rng(0)
        ds = random_binary_dataset(rng, m=20)
        view = BinaryView(ds)
        C = 2.0
        cfg = TrainConfig(C=C, epsilon=20 * C * 1.0 + 1.0, j_max=10)
        model, records = train(view, cfg)
        assert len(model.learners) == 0 and len(records) == 0
        majority = 1.0 if np.sum(view.signed_labels) >= 0 else -1.0
        assert model.bias == majority

    def test_jmax_one_matches_direct_stump_fit(self):
        rng = np.random.default_rng(1)
        ds = random_binary_dataset(rng, m=30)
        view = BinaryView(ds)
        cfg = TrainConfig(C=1.0, j_max=1)
        model, records = train(view, cfg)
        assert len(model.learners) == 1
        expected, _ = train_stump(view.signed_labels * cfg.initial_alpha, ds.features)
        assert model.learners[0] == expected
        # the first argmax does not depend on the positive constant
        other, _ = train_stump(view.signed_labels * 0.123, ds.features)
        assert expected == other

    def test_monotone_primal_descent(self):
        rng = np.random.default_rng(2)
        for trial in range(3):
            ds = random_binary_dataset(rng, m=40, d=4)
            model, records = train(BinaryView(ds), TrainConfig(C=1.0, j_max=25))
            primals = [r.primal_obj for r in records]
            for a, b in zip(primals[:-1], primals[1:]):
                assert b <= a + 1e-6 * (1.0 + abs(a))

    def test_trace_complete_and_scores_recorded(self):
        rng = np.random.default_rng(3)
        ds = random_binary_dataset(rng, m=30)
        model, records = train(BinaryView(ds), TrainConfig(C=1.0, j_max=15))
        assert len(records) == len(model.learners)
        for i, rec in enumerate(records):
            assert rec.iteration == i + 1
            assert rec.selection_score >= 0.0
            assert rec.gap_sample == 0.5 * rec.selection_score**2
            assert rec.primal_obj >= rec.dual_obj - 1e-9

    def test_gap_greedy_selection(self):
        # the learner picked by the signed-score rule maximizes the
        # per-candidate duality-gap term over the whole stump family
        rng = np.random.default_rng(4)
        for trial in range(5):
            m = int(rng.integers(8, 31))
            d = int(rng.integers(1, 5))
            X = rng.standard_normal((m, d))
            y = np.where(rng.random(m) < 0.5, 1.0, -1.0)
            y[0], y[1] = 1.0, -1.0
            alpha = rng.uniform(0.0, 1.0, size=m)
            picked, score = train_stump(y * alpha, X)
            gaps = []
            for f, t in stump_candidates(X):
                resp = response_column(DecisionStump(f, t, 1), X)
                gaps.append(unselected_gap_term(alpha, y, [resp]))
            assert abs(0.5 * score**2 - max(gaps)) <= 1e-9 * (1.0 + max(gaps))

    def test_termination_soundness_epsilon(self):
        # when training stops via the threshold, every stump in the family
        # scores below it
        rng = np.random.default_rng(5)
        ds = random_binary_dataset(rng, m=14, d=2)
        view = BinaryView(ds)
        epsilon = 0.35
        cfg = TrainConfig(C=0.05, epsilon=epsilon, j_max=200)
        model, records = train(view, cfg)
        assert len(model.learners) < 200
        # recover the final multipliers by re-solving on the final columns
        if model.learners:
            H = np.array([response_column(h, ds.features) for h in model.learners])
            sol = solve_restricted(H, view.signed_labels, SolverConfig(C=cfg.C))
            alpha = sol.alpha
        else:
            alpha = np.full(ds.n_samples, cfg.initial_alpha)
        u = view.signed_labels * alpha
        stump, best = train_stump(u, ds.features)
        stopped_by_duplicate = any(
            stump == h for h in model.learners
        )
        assert best < epsilon or stopped_by_duplicate

    def test_duplicate_append_leaves_primal_unchanged(self):
        rng = np.random.default_rng(6)
        ds = random_binary_dataset(rng, m=25)
        view = BinaryView(ds)
        stump, _ = train_stump(view.signed_labels, ds.features)
        col = response_column(stump, ds.features)
        H1 = col[None, :]
        H2 = np.vstack([H1, H1])
        cfg = SolverConfig(C=1.0)
        a = solve_restricted(H1, view.signed_labels, cfg)
        b = solve_restricted(H2, view.signed_labels, cfg, warm_start=a.alpha)
        assert abs(a.primal_obj - b.primal_obj) <= 1e-4 * (1.0 + abs(a.primal_obj))

    def test_pool_family_training_runs(self):
        rng = np.random.default_rng(7)
        ds = random_binary_dataset(rng, m=40, d=2)
        pool = PoolConfig(family="fourier", pool_size=100, sigma=1.0, rng_seed=3)
        model, records = train(BinaryView(ds), TrainConfig(C=1.0, j_max=8, pool=pool))
        assert model.family == "fourier"
        assert all(isinstance(h, FourierLearner) for h in model.learners)
        assert all(r.selection_score >= 0.0 for r in records)

    def test_deterministic_given_seed(self):
        rng = np.random.default_rng(8)
        ds = random_binary_dataset(rng, m=30, d=2)
        pool = PoolConfig(family="perceptron", pool_size=50, rng_seed=11)
        cfg = TrainConfig(C=1.0, j_max=6, pool=pool)
        m1, r1 = train(BinaryView(ds), cfg)
        m2, r2 = train(BinaryView(ds), cfg)
        assert np.array_equal(m1.weights, m2.weights)
        assert m1.bias == m2.bias
        assert [r.selection_score for r in r1] == [r.selection_score for r in r2]


class TestPredict:
    def test_empty_model(self):
        model = EnsembleModel([], np.zeros(0), 0.0)
        margin, label = predict(model, np.array([1.0, 2.0]))
        assert margin == 0.0 and label == 1

    def test_single_learner_arithmetic(self):
        h = DecisionStump(0, 0.0, 1)
        model = EnsembleModel([h], np.array([2.0]), -1.0)
        margin, label = predict(model, np.array([5.0]))  # response +1
        assert margin == 1.0 and label == 1

    def test_batch_equals_pointwise(self):
        rng = np.random.default_rng(9)
        ds = random_binary_dataset(rng, m=30, d=3)
        model, _ = train(BinaryView(ds), TrainConfig(C=1.0, j_max=10))
        X = rng.standard_normal((100, 3))
        margins, labels = predict_batch(model, X)
        for i in range(100):
            mi, li = predict(model, X[i])
            assert abs(margins[i] - mi) <= 1e-12
            assert labels[i] == li


class TestFeatureFrequency:
    def test_counts(self):
        stumps = [DecisionStump(0, 0.1, 1), DecisionStump(0, 0.5, -1), DecisionStump(3, 0.2, 1)]
        model = EnsembleModel(stumps, np.ones(3), 0.0)
        assert feature_frequency([model], 4).tolist() == [2, 0, 0, 1]

    def test_empty_list(self):
        assert feature_frequency([], 5).tolist() == [0] * 5

    def test_conservation(self):
        rng = np.random.default_rng(10)
        models = []
        total = 0
        for _ in range(3):
            n = int(rng.integers(1, 6))
            stumps = [DecisionStump(int(rng.integers(0, 4)), 0.0, 1) for _ in range(n)]
            models.append(EnsembleModel(stumps, np.ones(n), 0.0))
            total += n
        assert feature_frequency(models, 4).sum() == total

    def test_non_stump_rejected(self):
        model = EnsembleModel([FourierLearner(np.ones(2), 0.0)], np.ones(1), 0.0)
        with pytest.raises(ValueError):
            feature_frequency([model], 2)


class TestModelDocument:
    def test_round_trip(self):
        rng = np.random.default_rng(11)
        ds = random_binary_dataset(rng, m=24, d=2)
        model, _ = train(BinaryView(ds), TrainConfig(C=1.0, j_max=5))
        doc = model_to_document(model)
        again, scaler, label_map = model_from_document(doc)
        assert scaler is None and label_map is None
        assert np.array_equal(model.weights, again.weights)
        assert model.bias == again.bias
        assert model.learners == again.learners
