"""Stratified k-fold splitting and cross-validated evaluation."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from ..errors import ClassTooSmall, DefectscopeError, FoldError
from ..learners import ModelConfig, train
from .metrics import ConfusionCounts, f1, macro_scores, mean_std, precision, recall


def stratified_kfold_split(labels: Sequence, k: int, seed: int = 42) -> list[np.ndarray]:
    """Partition row indices into ``k`` folds preserving class proportions.

    Classes are taken in sorted order, each class's rows shuffled with the
    seeded generator, and the concatenation dealt round-robin: position p
    goes to fold p mod k. Fold sizes then differ by at most one overall and
    within each class.
    """
    if k < 2:
        raise ValueError("k must be at least 2")
    labels = [str(label) for label in labels]
    classes = sorted(set(labels))
    rng = np.random.default_rng(seed)
    sequence: list[int] = []
    for c in classes:
        members = np.array([i for i, label in enumerate(labels) if label == c], dtype=np.int64)
        if len(members) < k:
            raise ClassTooSmall(f"class {c!r} has {len(members)} rows, fewer than k={k}")
        sequence.extend(rng.permutation(members).tolist())
    folds: list[list[int]] = [[] for _ in range(k)]
    for position, row in enumerate(sequence):
        folds[position % k].append(row)
    return [np.array(sorted(f), dtype=np.int64) for f in folds]


@dataclass
class EvalReport:
    key: str
    config: ModelConfig
    k: int
    seed: int
    n_rows: int
    fold_precision: list[float]
    fold_recall: list[float]
    fold_f1: list[float]
    per_class: dict[str, ConfusionCounts] = field(default_factory=dict)

    @property
    def mean_f1(self) -> float:
        return mean_std(self.fold_f1)[0]

    @property
    def std_f1(self) -> float:
        return mean_std(self.fold_f1)[1]

    @property
    def mean_precision(self) -> float:
        return mean_std(self.fold_precision)[0]

    @property
    def mean_recall(self) -> float:
        return mean_std(self.fold_recall)[0]

    def class_breakdown(self) -> dict[str, dict]:
        """Confusion counts pooled over folds, with their P/R/F1."""
        return {label: {"true_positive": c.true_positive, "false_positive": c.false_positive,
                        "false_negative": c.false_negative, "true_negative": c.true_negative,
                        "precision": precision(c), "recall": recall(c), "f1": f1(c)}
                for label, c in sorted(self.per_class.items())}


def cross_validate(config: ModelConfig, X: np.ndarray, y: Sequence[str], k: int = 5, seed: int = 42,
                   key: str = "") -> EvalReport:
    """Train on each fold's complement and score macro P/R/F1 on the fold."""
    X = np.asarray(X, dtype=np.float64)
    y = [str(label) for label in y]
    folds = stratified_kfold_split(y, k, seed)
    fold_p, fold_r, fold_f = [], [], []
    pooled: dict[str, ConfusionCounts] = {}
    for index, test in enumerate(folds):
        mask = np.ones(len(y), dtype=bool)
        mask[test] = False
        try:
            model = train(config, X[mask], [y[i] for i in np.flatnonzero(mask)])
            predicted = model.predict_batch(X[test])
        except DefectscopeError as exc:
            raise FoldError(index, exc) from exc
        scores = macro_scores([y[i] for i in test], predicted)
        fold_p.append(scores.precision)
        fold_r.append(scores.recall)
        fold_f.append(scores.f1)
        for label, cc in scores.per_class.items():
            pooled[label] = pooled.get(label, ConfusionCounts()) + cc
    return EvalReport(key, config, k, seed, len(y), fold_p, fold_r, fold_f, pooled)
