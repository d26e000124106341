"""One-vs-rest and one-vs-one reductions over binary estimators."""

from __future__ import annotations

from collections.abc import Callable
from itertools import combinations

import numpy as np


def _positive_score(est, X: np.ndarray) -> np.ndarray:
    return est.scores(X)[:, 1]


class OneVsRest:
    """One binary model per class.

    Margin-based bases (LSVM) report each class's decision value;
    probabilistic bases report positive-class probabilities renormalized to
    sum to one.
    """

    name = "ovr"

    def __init__(self, factory: Callable[[], object], n_classes: int = 0, margin: bool = False) -> None:
        self.factory = factory
        self.n_classes = n_classes
        self.margin = margin
        self.models: list = []

    def fit(self, X: np.ndarray, y: np.ndarray, n_classes: int, seed: int = 0) -> "OneVsRest":
        self.n_classes = n_classes
        self.models = [self.factory().fit(X, (y == c).astype(np.int64), 2, seed) for c in range(n_classes)]
        return self

    def scores(self, X: np.ndarray) -> np.ndarray:
        s = np.stack([_positive_score(m, X) for m in self.models], axis=1)
        if self.margin:
            return s
        total = s.sum(axis=1, keepdims=True)
        uniform = np.full_like(s, 1.0 / self.n_classes)
        return np.where(total > 0, s / np.where(total > 0, total, 1.0), uniform)


class OneVsOne:
    """One binary model per class pair; scores are vote fractions.

    A pair model votes for the higher-indexed class only when it strictly
    prefers it, and the final argmax resolves vote ties to the lowest index.
    """

    name = "ovo"

    def __init__(self, factory: Callable[[], object], n_classes: int = 0) -> None:
        self.factory = factory
        self.n_classes = n_classes
        self.pairs: list[tuple[int, int]] = []
        self.models: list = []

    def fit(self, X: np.ndarray, y: np.ndarray, n_classes: int, seed: int = 0) -> "OneVsOne":
        self.n_classes = n_classes
        self.pairs = list(combinations(range(n_classes), 2))
        self.models = []
        for a, b in self.pairs:
            mask = (y == a) | (y == b)
            self.models.append(self.factory().fit(X[mask], (y[mask] == b).astype(np.int64), 2, seed))
        return self

    def scores(self, X: np.ndarray) -> np.ndarray:
        votes = np.zeros((len(X), self.n_classes))
        rows = np.arange(len(X))
        for (a, b), model in zip(self.pairs, self.models):
            s = model.scores(X)
            winner = np.where(s[:, 1] > s[:, 0], b, a)
            votes[rows, winner] += 1
        return votes / max(1, len(self.pairs))
