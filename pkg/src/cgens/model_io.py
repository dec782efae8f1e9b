"""Versioned JSON model documents and CSV trace files.

Binary document: {version, family, learners, weights, bias, scaler, ...};
the stage-wise baseline shares it under family "adaboost".  Multi-class
documents add {class_count, codes, weight_matrix, biases}.  An optional
label_map records the original label value of each class id so predictions
can be reported in the input's label space.  All floats are written with
repr (shortest round-trip), so identical models serialize byte-identically.
"""

from __future__ import annotations

import csv
import json

import numpy as np

from .baselines import AdaBoostModel, AdaBoostRecord
from .cg_binary import EnsembleModel, IterationRecord
from .dataset import Scaler
from .mc_simplex import McIterationRecord, MulticlassModel, SimplexCode
from .weak import DecisionStump, FourierLearner, PerceptronLearner, WeakLearner

FORMAT_VERSION = 1


class ModelFormatError(ValueError):
    """Unreadable or unsupported model document."""


def learner_to_dict(h: WeakLearner) -> dict:
    if isinstance(h, DecisionStump):
        return {"kind": "stump", "feature_index": h.feature_index,
                "threshold": h.threshold, "polarity": h.polarity}
    if isinstance(h, PerceptronLearner):
        return {"kind": "perceptron", "direction": h.direction.tolist(), "offset": h.offset}
    if isinstance(h, FourierLearner):
        return {"kind": "fourier", "frequency": h.frequency.tolist(), "phase": h.phase}
    raise TypeError(f"not a weak learner: {type(h).__name__}")


def learner_from_dict(doc: dict) -> WeakLearner:
    kind = doc.get("kind")
    if kind == "stump":
        return DecisionStump(int(doc["feature_index"]), float(doc["threshold"]),
                             int(doc["polarity"]))
    if kind == "perceptron":
        return PerceptronLearner(np.asarray(doc["direction"], dtype=np.float64),
                                 float(doc["offset"]))
    if kind == "fourier":
        return FourierLearner(np.asarray(doc["frequency"], dtype=np.float64),
                              float(doc["phase"]))
    raise ModelFormatError(f"unknown learner kind {kind!r}")


def _scaler_to_dict(scaler: Scaler | None):
    if scaler is None:
        return None
    return {"mean": scaler.mean.tolist(), "scale": scaler.scale.tolist()}


def _scaler_from_dict(doc) -> Scaler | None:
    if doc is None:
        return None
    return Scaler(np.asarray(doc["mean"], dtype=np.float64),
                  np.asarray(doc["scale"], dtype=np.float64))


def model_to_document(model, scaler: Scaler | None = None, label_map=None) -> dict:
    """Serializable document for a binary, multi-class or stage-wise model."""
    if isinstance(model, EnsembleModel):
        doc = {
            "version": FORMAT_VERSION,
            "family": model.family,
            "learners": [learner_to_dict(h) for h in model.learners],
            "weights": model.weights.tolist(),
            "bias": float(model.bias),
        }
    elif isinstance(model, AdaBoostModel):
        doc = {
            "version": FORMAT_VERSION,
            "family": "adaboost",
            "learners": [learner_to_dict(h) for h in model.learners],
            "weights": model.weights.tolist(),
            "bias": 0.0,
        }
    elif isinstance(model, MulticlassModel):
        doc = {
            "version": FORMAT_VERSION,
            "family": model.family,
            "learners": [learner_to_dict(h) for h in model.learners],
            "class_count": model.code.class_count,
            "codes": model.code.codes.tolist(),
            "weight_matrix": model.weight_matrix.tolist(),
            "biases": model.biases.tolist(),
        }
    else:
        raise TypeError(f"cannot serialize {type(model).__name__}")
    doc["scaler"] = _scaler_to_dict(scaler)
    if label_map is not None:
        doc["label_map"] = [float(v) for v in label_map]
    return doc


def model_from_document(doc: dict):
    """Inverse of model_to_document: returns (model, scaler, label_map)."""
    version = doc.get("version")
    if version != FORMAT_VERSION:
        raise ModelFormatError(f"unsupported model format version {version!r}")
    scaler = _scaler_from_dict(doc.get("scaler"))
    label_map = doc.get("label_map")
    if label_map is not None:
        label_map = np.asarray(label_map, dtype=np.float64)
    learners = [learner_from_dict(d) for d in doc["learners"]]
    if "class_count" in doc:
        code = SimplexCode(np.asarray(doc["codes"], dtype=np.float64), int(doc["class_count"]))
        model = MulticlassModel(
            learners,
            np.asarray(doc["weight_matrix"], dtype=np.float64).reshape(len(learners), -1),
            np.asarray(doc["biases"], dtype=np.float64),
            code,
            family=doc.get("family", "stump"),
        )
    elif doc.get("family") == "adaboost":
        model = AdaBoostModel(learners, np.asarray(doc["weights"], dtype=np.float64))
    else:
        model = EnsembleModel(
            learners,
            np.asarray(doc["weights"], dtype=np.float64),
            float(doc["bias"]),
            family=doc.get("family", "stump"),
        )
    return model, scaler, label_map


def save_model(model, path, scaler: Scaler | None = None, label_map=None) -> None:
    doc = model_to_document(model, scaler=scaler, label_map=label_map)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")


def load_model(path):
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ModelFormatError(f"{path}: not a model document ({exc})")
    return model_from_document(doc)


TRACE_COLUMNS = {
    IterationRecord: ["iter", "learner", "score", "primal", "dual", "gap_sample", "train_err"],
    McIterationRecord: ["iter", "learner", "tau_star", "score", "objective", "train_err"],
    AdaBoostRecord: ["iter", "weighted_err", "stage_weight", "train_err"],
}


def _record_row(rec) -> list:
    if isinstance(rec, IterationRecord):
        return [rec.iteration, rec.learner, rec.selection_score, rec.primal_obj,
                rec.dual_obj, rec.gap_sample, rec.train_error]
    if isinstance(rec, McIterationRecord):
        return [rec.iteration, rec.learner, rec.tau_star, rec.selection_score,
                rec.objective, rec.train_error]
    if isinstance(rec, AdaBoostRecord):
        return [rec.iteration, rec.weighted_error, rec.stage_weight, rec.train_error]
    raise TypeError(f"not a trace record: {type(rec).__name__}")


def save_trace(records, path, record_type=None) -> None:
    """Write per-iteration records as CSV (column set depends on record type)."""
    if record_type is None:
        if not records:
            record_type = IterationRecord
        else:
            record_type = type(records[0])
    columns = TRACE_COLUMNS[record_type]
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for rec in records:
            writer.writerow([_fmt(v) for v in _record_row(rec)])


def _fmt(v):
    if isinstance(v, float):
        return repr(v)
    return v


def load_trace(path) -> list[dict]:
    """Read a trace CSV back as a list of {column: string} dicts."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        return list(csv.DictReader(fh))
