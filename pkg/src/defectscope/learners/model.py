"""train / predict facade and JSON model serialization."""

from __future__ import annotations

import json
from collections.abc import Sequence
from dataclasses import dataclass
from typing import IO

import numpy as np

from ..errors import DegenerateLabels, SchemaMismatch, WidthMismatch
from .config import BINARY_ONLY, ModelConfig
from .knn import KNNClassifier
from .mlp import MLPClassifier
from .multiclass import OneVsOne, OneVsRest
from .svm import LinearSVM
from .tree import RandomForestClassifier

FORMAT_VERSION = 1

_BASES = {"KNN": KNNClassifier, "RF": RandomForestClassifier, "LSVM": LinearSVM, "MLP": MLPClassifier}


def base_factory(config: ModelConfig, width: int):
    if config.algorithm == "KNN":
        return lambda: KNNClassifier(config.knn_k, config.knn_distance)
    if config.algorithm == "RF":
        m = config.max_features(width)
        return lambda: RandomForestClassifier(config.rf_estimators, m)
    if config.algorithm == "LSVM":
        return lambda: LinearSVM(config.lsvm_penalty, config.lsvm_epochs)
    return lambda: MLPClassifier(config.mlp_hidden, config.mlp_epochs, config.learning_rate)


def effective_strategy(config: ModelConfig, n_labels: int) -> str:
    """Binary problems always use one native model, whatever the wrapper."""
    if n_labels <= 2:
        return "native"
    if config.multiclass == "native":
        return "ovr" if config.algorithm in BINARY_ONLY else "native"
    return config.multiclass


@dataclass(frozen=True)
class Prediction:
    label: str
    scores: dict[str, float]


class TrainedModel:
    """Immutable after training; safe to share between threads for prediction."""

    def __init__(self, config: ModelConfig, labels: Sequence[str], width: int, strategy: str,
                 estimator, scaling_ref: str | None = None) -> None:
        self.config = config
        self.labels = tuple(labels)
        self.width = width
        self.strategy = strategy
        self.estimator = estimator
        self.scaling_ref = scaling_ref

    def _check(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if X.ndim == 1:
            X = X[None, :]
        if X.shape[1] != self.width:
            raise WidthMismatch(self.width, X.shape[1])
        return X

    def score_matrix(self, X: np.ndarray) -> np.ndarray:
        return self.estimator.scores(self._check(X))

    def predict_batch(self, X: np.ndarray) -> list[str]:
        s = self.score_matrix(X)
        return [self.labels[i] for i in np.argmax(s, axis=1)]

    def predict(self, vector) -> Prediction:
        s = self.score_matrix(vector)[0]
        return Prediction(self.labels[int(np.argmax(s))],
                          {label: float(v) for label, v in zip(self.labels, s)})

    # ------------------------------------------------------------ serialization
    def to_json(self) -> dict:
        return {
            "format_version": FORMAT_VERSION,
            "config": self.config.to_dict(),
            "labels": list(self.labels),
            "width": self.width,
            "strategy": self.strategy,
            "scaling_ref": self.scaling_ref,
            "estimator": _dump(self.estimator),
        }

    @classmethod
    def from_json(cls, data: dict) -> "TrainedModel":
        if data.get("format_version") != FORMAT_VERSION:
            raise SchemaMismatch(f"unsupported model format {data.get('format_version')!r}")
        config = ModelConfig.from_dict(data["config"])
        return cls(config, data["labels"], data["width"], data["strategy"],
                   _load(data["estimator"], config, data["width"]), data.get("scaling_ref"))

    def save(self, fh: IO[str]) -> None:
        json.dump(self.to_json(), fh, sort_keys=True)

    @classmethod
    def load(cls, fh: IO[str]) -> "TrainedModel":
        return cls.from_json(json.load(fh))


def _dump(est) -> dict:
    if isinstance(est, OneVsRest):
        return {"type": "ovr", "n_classes": est.n_classes, "margin": est.margin,
                "models": [_dump(m) for m in est.models]}
    if isinstance(est, OneVsOne):
        return {"type": "ovo", "n_classes": est.n_classes, "pairs": est.pairs,
                "models": [_dump(m) for m in est.models]}
    return {"type": est.name, "data": est.to_json()}


def _load(data: dict, config: ModelConfig, width: int):
    kind = data["type"]
    factory = base_factory(config, width)
    if kind == "ovr":
        est = OneVsRest(factory, data["n_classes"], data["margin"])
        est.models = [_load(m, config, width) for m in data["models"]]
        return est
    if kind == "ovo":
        est = OneVsOne(factory, data["n_classes"])
        est.pairs = [tuple(p) for p in data["pairs"]]
        est.models = [_load(m, config, width) for m in data["models"]]
        return est
    if kind not in _BASES:
        raise SchemaMismatch(f"unknown estimator type {kind!r}")
    return _BASES[kind].from_json(data["data"])


def _as_arrays(X, y):
    if y is None:
        rows = list(X)
        X = [r[0] for r in rows]
        y = [r[1] for r in rows]
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2:
        X = X.reshape(len(X), -1)
    return X, [str(label) for label in y]


def train(config: ModelConfig, X, y=None, *, scaling_ref: str | None = None) -> TrainedModel:
    """Fit a model. Pass ``(X, y)`` or a single iterable of ``(vector, label)`` rows.

    The label vocabulary is sorted; label index means position in it.
    """
    X, labels = _as_arrays(X, y)
    if len(X) == 0:
        raise DegenerateLabels("no training rows")
    if len(labels) != len(X):
        raise ValueError("X and y lengths differ")
    vocab = sorted(set(labels))
    if config.algorithm in ("LSVM", "MLP"):
        if len(X) < 2 or len(vocab) < 2:
            raise DegenerateLabels(f"{config.algorithm} needs at least two rows and two labels")
    y_idx = np.array([vocab.index(label) for label in labels], dtype=np.int64)
    width = X.shape[1]
    strategy = effective_strategy(config, len(vocab))
    factory = base_factory(config, width)
    if strategy == "native":
        est = factory()
    elif strategy == "ovr":
        est = OneVsRest(factory, margin=config.algorithm == "LSVM")
    else:
        est = OneVsOne(factory)
    est.fit(X, y_idx, len(vocab), config.seed)
    return TrainedModel(config, vocab, width, strategy, est, scaling_ref)


def predict(model: TrainedModel, vector) -> Prediction:
    return model.predict(vector)
