"""Brute-force k-nearest-neighbour classifier."""

from __future__ import annotations

import numpy as np

from ..errors import KTooLarge


def distances(train: np.ndarray, query: np.ndarray, metric: str) -> np.ndarray:
    """Distance from ``query`` to every training row.

    Euclidean distances are returned squared; the ranking is the same and
    integer inputs stay exact, which keeps tie-breaking well defined.
    """
    diff = train - query
    if metric == "euclidean":
        return np.einsum("ij,ij->i", diff, diff)
    if metric == "manhattan":
        return np.abs(diff).sum(axis=1)
    raise ValueError(f"unknown distance {metric!r}")


class KNNClassifier:
    name = "KNN"

    def __init__(self, k: int = 5, metric: str = "euclidean") -> None:
        self.k = k
        self.metric = metric
        self.X = np.empty((0, 0))
        self.y = np.empty(0, dtype=np.int64)
        self.n_classes = 0

    def fit(self, X: np.ndarray, y: np.ndarray, n_classes: int, seed: int = 0) -> "KNNClassifier":
        self.X = np.asarray(X, dtype=np.float64).copy()
        self.y = np.asarray(y, dtype=np.int64).copy()
        self.n_classes = n_classes
        return self

    def neighbors(self, query: np.ndarray, k: int) -> np.ndarray:
        """Row ids of the ``k`` nearest rows; equal distances go to the lower id."""
        if k > len(self.X):
            raise KTooLarge(f"k={k} exceeds the {len(self.X)} training rows")
        if k < 1:
            raise KTooLarge("k must be positive")
        d = distances(self.X, np.asarray(query, dtype=np.float64), self.metric)
        return np.argsort(d, kind="stable")[:k]

    def scores(self, X: np.ndarray) -> np.ndarray:
        k = min(self.k, len(self.X))
        out = np.zeros((len(X), self.n_classes))
        for i, q in enumerate(np.asarray(X, dtype=np.float64)):
            votes = np.bincount(self.y[self.neighbors(q, k)], minlength=self.n_classes)
            out[i] = votes / k
        return out

    def to_json(self) -> dict:
        return {"k": self.k, "metric": self.metric, "n_classes": self.n_classes,
                "X": self.X.tolist(), "y": self.y.tolist()}

    @classmethod
    def from_json(cls, data: dict) -> "KNNClassifier":
        model = cls(data["k"], data["metric"])
        width = len(data["X"][0]) if data["X"] else 0
        model.X = np.array(data["X"], dtype=np.float64).reshape(len(data["X"]), width)
        model.y = np.array(data["y"], dtype=np.int64)
        model.n_classes = data["n_classes"]
        return model


def nearest_neighbors(model, vector, k: int) -> list[int]:
    """Ordered neighbour ids for a trained KNN model (or its wrapper)."""
    est = getattr(model, "estimator", model)
    if not isinstance(est, KNNClassifier):
        raise TypeError("nearest_neighbors needs a natively trained KNN model")
    return est.neighbors(np.asarray(vector, dtype=np.float64), k).tolist()
