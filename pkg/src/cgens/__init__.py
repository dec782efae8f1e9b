"""Ensemble classifiers trained by column generation on SVM master problems.

Binary models grow one weak learner at a time by pricing the hypothesis
family against the dual multipliers of an embedded linear SVM and re-solving
the restricted problem (fully corrective).  Multi-class models do the same on
a simplex-coded least-squares SVM whose per-iteration solve is closed form.
"""

from .baselines import AdaBoostModel, predict_adaboost, train_adaboost
from .cg_binary import EnsembleModel, TrainConfig, feature_frequency, predict, train
from .dataset import BinaryView, Dataset, Scaler, SplitSpec, kfold, load_csv, load_libsvm, standardize
from .evalharness import EvalReport, GridSpec, MethodSpec, benchmark, cv_select, error_rate
from .linsvm import SolverConfig, SvmSolution, solve_restricted
from .mc_simplex import MulticlassModel, predict_mc, simplex_codes, train_mc
from .weak import (
    DecisionStump,
    FourierLearner,
    PerceptronLearner,
    PoolConfig,
    response_column,
    sample_pool,
    select_from_pool,
    train_stump,
)

__version__ = "0.1.0"

__all__ = [
    "AdaBoostModel",
    "BinaryView",
    "Dataset",
    "DecisionStump",
    "EnsembleModel",
    "EvalReport",
    "FourierLearner",
    "GridSpec",
    "MethodSpec",
    "MulticlassModel",
    "PerceptronLearner",
    "PoolConfig",
    "Scaler",
    "SolverConfig",
    "SplitSpec",
    "SvmSolution",
    "TrainConfig",
    "benchmark",
    "cv_select",
    "error_rate",
    "feature_frequency",
    "kfold",
    "load_csv",
    "load_libsvm",
    "predict",
    "predict_adaboost",
    "predict_mc",
    "response_column",
    "sample_pool",
    "select_from_pool",
    "simplex_codes",
    "solve_restricted",
    "standardize",
    "train",
    "train_adaboost",
    "train_mc",
    "train_stump",
]
