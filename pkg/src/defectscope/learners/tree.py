"""Gini decision trees and a bootstrap random forest."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

LEAF = -1


@dataclass
class DecisionTree:
    """Flat node arrays; ``feature[i] == LEAF`` marks a leaf predicting ``label[i]``.

    Rows go left when ``x[feature] <= threshold``.
    """

    feature: list[int] = field(default_factory=list)
    threshold: list[float] = field(default_factory=list)
    left: list[int] = field(default_factory=list)
    right: list[int] = field(default_factory=list)
    label: list[int] = field(default_factory=list)

    def _add(self) -> int:
        for arr, v in ((self.feature, LEAF), (self.threshold, 0.0), (self.left, LEAF),
                       (self.right, LEAF), (self.label, 0)):
            arr.append(v)
        return len(self.feature) - 1

    @property
    def n_nodes(self) -> int:
        return len(self.feature)

    def depth(self) -> int:
        best, stack = 0, [(0, 0)]
        while stack:
            node, d = stack.pop()
            best = max(best, d)
            if self.feature[node] != LEAF:
                stack += [(self.left[node], d + 1), (self.right[node], d + 1)]
        return best

    def apply(self, X: np.ndarray) -> np.ndarray:
        feature = np.asarray(self.feature)
        threshold = np.asarray(self.threshold)
        left, right = np.asarray(self.left), np.asarray(self.right)
        node = np.zeros(len(X), dtype=np.int64)
        rows = np.arange(len(X))
        active = feature[node] != LEAF
        while active.any():
            r, n = rows[active], node[active]
            go_left = X[r, feature[n]] <= threshold[n]
            node[r] = np.where(go_left, left[n], right[n])
            active = feature[node] != LEAF
        return node

    def predict(self, X: np.ndarray) -> np.ndarray:
        return np.asarray(self.label)[self.apply(np.asarray(X, dtype=np.float64))]

    def to_json(self) -> dict:
        return {"feature": self.feature, "threshold": self.threshold, "left": self.left,
                "right": self.right, "label": self.label}

    @classmethod
    def from_json(cls, data: dict) -> "DecisionTree":
        return cls(list(data["feature"]), [float(t) for t in data["threshold"]], list(data["left"]),
                   list(data["right"]), list(data["label"]))


def _majority(counts: np.ndarray) -> int:
    return int(np.argmax(counts))  # first maximum is the lowest label index


def best_split(X: np.ndarray, onehot: np.ndarray, features: np.ndarray):
    """Lowest weighted Gini split over ``features``; None when no feature varies.

    Candidate thresholds are midpoints between adjacent distinct sorted
    values. Equal impurities resolve to the lower feature id, then the lower
    threshold.
    """
    n = len(X)
    if n < 2 or len(features) == 0:
        return None
    features = np.sort(features)
    Xn = X[:, features]
    order = np.argsort(Xn, axis=0, kind="stable")
    Xs = np.take_along_axis(Xn, order, axis=0)
    valid = Xs[1:] > Xs[:-1]
    if not valid.any():
        return None
    left = np.cumsum(onehot[order], axis=0)[:-1]          # (n-1, m, L)
    right = onehot.sum(axis=0) - left
    nl = np.arange(1, n, dtype=np.float64)[:, None]
    nr = n - nl
    impurity = (nl - (left ** 2).sum(-1) / nl) + (nr - (right ** 2).sum(-1) / nr)
    impurity = np.where(valid, impurity / n, np.inf)
    # column-major scan: lowest feature first, then lowest position
    flat = impurity.T.ravel()
    pick = int(np.argmin(flat))
    j, p = divmod(pick, n - 1)
    lo, hi = Xs[p, j], Xs[p + 1, j]
    threshold = (lo + hi) / 2.0
    if not lo <= threshold < hi:
        threshold = lo
    return int(features[j]), float(threshold), float(flat[pick])


def build_decision_tree(X: np.ndarray, y: np.ndarray, n_classes: int, max_features: int | None = None,
                        seed: int | np.random.Generator = 0) -> DecisionTree:
    """Grow a tree until every leaf is pure or its rows cannot be separated.

    ``max_features`` features are drawn per node. If none of them varies
    within the node, the remaining features are tried, so consistent data
    is always memorized. Splits are taken even without an impurity decrease
    (XOR-like data has none at the root yet is separable further down).
    Inseparable mixed nodes predict the majority, ties to the lowest label.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    width = X.shape[1]
    m = width if max_features is None else max(1, min(width, max_features))
    onehot = np.eye(n_classes)[y]
    tree = DecisionTree()
    root = tree._add()
    stack = [(root, np.arange(len(X)))]
    while stack:
        node, idx = stack.pop()
        counts = onehot[idx].sum(axis=0)
        tree.label[node] = _majority(counts)
        if np.count_nonzero(counts) <= 1:
            continue
        sampled = rng.choice(width, size=m, replace=False) if m < width else np.arange(width)
        split = best_split(X[idx], onehot[idx], sampled)
        if split is None and m < width:
            rest = np.setdiff1d(np.arange(width), sampled)
            split = best_split(X[idx], onehot[idx], rest)
        if split is None:
            continue
        f, t, _ = split
        mask = X[idx, f] <= t
        tree.feature[node], tree.threshold[node] = f, t
        l, r = tree._add(), tree._add()
        tree.left[node], tree.right[node] = l, r
        stack.append((r, idx[~mask]))
        stack.append((l, idx[mask]))
    return tree


def canonical_order(X: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Row permutation sorting by features (first column most significant), then label."""
    keys = [y] + [X[:, j] for j in range(X.shape[1] - 1, -1, -1)]
    return np.lexsort(keys)


class RandomForestClassifier:
    """Bootstrap ensemble of Gini trees with per-node feature sampling.

    Rows are put into a canonical order first and tree ``i`` draws its
    bootstrap sample and feature subsets from ``seed + i``, so results do
    not depend on input row order or on the order trees are built. A
    single-tree forest is fitted on all rows without bootstrapping.
    Scores are the fractions of tree votes.
    """

    name = "RF"

    def __init__(self, n_estimators: int = 10, max_features: int | None = None) -> None:
        self.n_estimators = n_estimators
        self.max_features = max_features
        self.trees: list[DecisionTree] = []
        self.n_classes = 0

    def fit(self, X: np.ndarray, y: np.ndarray, n_classes: int, seed: int = 0) -> "RandomForestClassifier":
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.int64)
        order = canonical_order(X, y)
        X, y = X[order], y[order]
        self.n_classes = n_classes
        self.trees = []
        n = len(X)
        for i in range(self.n_estimators):
            rng = np.random.default_rng(seed + i)
            idx = np.arange(n) if self.n_estimators == 1 else rng.integers(0, n, size=n)
            self.trees.append(build_decision_tree(X[idx], y[idx], n_classes, self.max_features, rng))
        return self

    def scores(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        votes = np.zeros((len(X), self.n_classes))
        rows = np.arange(len(X))
        for tree in self.trees:
            votes[rows, tree.predict(X)] += 1
        return votes / len(self.trees)

    def to_json(self) -> dict:
        return {"n_estimators": self.n_estimators, "max_features": self.max_features,
                "n_classes": self.n_classes, "trees": [t.to_json() for t in self.trees]}

    @classmethod
    def from_json(cls, data: dict) -> "RandomForestClassifier":
        model = cls(data["n_estimators"], data["max_features"])
        model.n_classes = data["n_classes"]
        model.trees = [DecisionTree.from_json(t) for t in data["trees"]]
        return model
