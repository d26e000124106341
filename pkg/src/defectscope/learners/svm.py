"""Primal linear SVM trained by epoch-shuffled stochastic subgradient descent.

Objective (bias folded into the weights as a constant feature):

    F(w) = lam/2 * ||w||^2 + mean_i max(0, 1 - y_i * w.x_i),   lam = 1 / (C * n)

Step t uses eta_t = 1 / (lam * t) followed by projection onto the ball of
radius 1/sqrt(lam), which contains the optimum. The candidate after each
epoch is the average of that epoch's iterates. The returned weights are the
best candidate seen so far, so the recorded objective never increases.
"""

from __future__ import annotations

import math

import numpy as np


def hinge_objective(w: np.ndarray, Xb: np.ndarray, y: np.ndarray, lam: float) -> float:
    margins = 1.0 - y * (Xb @ w)
    return float(0.5 * lam * (w @ w) + np.maximum(0.0, margins).mean())


class LinearSVM:
    name = "LSVM"

    def __init__(self, penalty: float = 1.0, epochs: int = 200) -> None:
        self.penalty = penalty
        self.epochs = epochs
        self.w = np.empty(0)
        self.objective_history: list[float] = []
        self.epoch_objectives: list[float] = []

    @property
    def coef(self) -> np.ndarray:
        return self.w[:-1]

    @property
    def bias(self) -> float:
        return float(self.w[-1])

    def fit(self, X: np.ndarray, y: np.ndarray, n_classes: int = 2, seed: int = 0) -> "LinearSVM":
        """``y`` holds class indices 0/1; index 1 is the positive side."""
        if n_classes != 2:
            raise ValueError("LinearSVM is a binary classifier; wrap it for more classes")
        X = np.asarray(X, dtype=np.float64)
        signs = np.where(np.asarray(y) == 1, 1.0, -1.0)
        n, d = X.shape
        Xb = np.hstack([X, np.ones((n, 1))])
        lam = 1.0 / (self.penalty * n)
        radius = 1.0 / math.sqrt(lam)
        rng = np.random.default_rng(seed)

        w = np.zeros(d + 1)
        best_w = w.copy()
        best = hinge_objective(w, Xb, signs, lam)
        self.objective_history = [best]
        self.epoch_objectives = [best]
        t = 0
        for _ in range(self.epochs):
            acc = np.zeros(d + 1)
            for i in rng.permutation(n):
                t += 1
                eta = 1.0 / (lam * t)
                xi, yi = Xb[i], signs[i]
                violated = yi * (w @ xi) < 1.0
                w *= 1.0 - eta * lam
                if violated:
                    w += (eta * yi) * xi
                norm = math.sqrt(w @ w)
                if norm > radius:
                    w *= radius / norm
                acc += w
            candidate = acc / n
            value = hinge_objective(candidate, Xb, signs, lam)
            self.epoch_objectives.append(value)
            if value < best:
                best, best_w = value, candidate
            self.objective_history.append(best)
        self.w = best_w
        return self

    def decision(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        return X @ self.coef + self.bias

    def scores(self, X: np.ndarray) -> np.ndarray:
        """Margins, not probabilities: column 1 is the decision value, column 0 its negation."""
        d = self.decision(X)
        return np.stack([-d, d], axis=1)

    def to_json(self) -> dict:
        return {"penalty": self.penalty, "epochs": self.epochs, "w": self.w.tolist(),
                "objective_history": self.objective_history}

    @classmethod
    def from_json(cls, data: dict) -> "LinearSVM":
        model = cls(data["penalty"], data["epochs"])
        model.w = np.array(data["w"], dtype=np.float64)
        model.objective_history = list(data.get("objective_history", []))
        return model
