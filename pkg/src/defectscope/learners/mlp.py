"""One-hidden-layer perceptron: logistic hidden units, softmax output, cross-entropy."""

from __future__ import annotations

import numpy as np

PARAMS = ("W1", "b1", "W2", "b2")


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def _softmax(z: np.ndarray) -> np.ndarray:
    z = z - z.max(axis=1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True)


def forward(params: dict, X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    hidden = _sigmoid(X @ params["W1"] + params["b1"])
    return hidden, _softmax(hidden @ params["W2"] + params["b2"])


def loss_and_gradients(params: dict, X: np.ndarray, Y: np.ndarray) -> tuple[float, dict]:
    """Mean cross-entropy and its exact gradients; ``Y`` is one-hot."""
    n = len(X)
    hidden, probs = forward(params, X)
    loss = float(-np.sum(Y * np.log(np.clip(probs, 1e-300, None))) / n)
    d_out = (probs - Y) / n
    d_hidden = (d_out @ params["W2"].T) * hidden * (1.0 - hidden)
    grads = {
        "W2": hidden.T @ d_out,
        "b2": d_out.sum(axis=0),
        "W1": X.T @ d_hidden,
        "b1": d_hidden.sum(axis=0),
    }
    return loss, grads


def init_params(n_in: int, n_hidden: int, n_out: int, rng: np.random.Generator) -> dict:
    return {
        "W1": rng.normal(0.0, 1.0 / np.sqrt(max(1, n_in)), size=(n_in, n_hidden)),
        "b1": np.zeros(n_hidden),
        "W2": rng.normal(0.0, 1.0 / np.sqrt(n_hidden), size=(n_hidden, n_out)),
        "b2": np.zeros(n_out),
    }


class MLPClassifier:
    name = "MLP"

    def __init__(self, hidden: int = 64, epochs: int = 500, learning_rate: float = 0.5) -> None:
        self.hidden = hidden
        self.epochs = epochs
        self.learning_rate = learning_rate
        self.params: dict = {}
        self.loss_history: list[float] = []

    def fit(self, X: np.ndarray, y: np.ndarray, n_classes: int, seed: int = 0) -> "MLPClassifier":
        X = np.asarray(X, dtype=np.float64)
        Y = np.eye(n_classes)[np.asarray(y, dtype=np.int64)]
        params = init_params(X.shape[1], self.hidden, n_classes, np.random.default_rng(seed))
        self.loss_history = []
        for _ in range(self.epochs):
            loss, grads = loss_and_gradients(params, X, Y)
            self.loss_history.append(loss)
            for name in PARAMS:
                params[name] -= self.learning_rate * grads[name]
        self.params = params
        return self

    def scores(self, X: np.ndarray) -> np.ndarray:
        return forward(self.params, np.asarray(X, dtype=np.float64))[1]

    def to_json(self) -> dict:
        return {"hidden": self.hidden, "epochs": self.epochs, "learning_rate": self.learning_rate,
                "params": {k: self.params[k].tolist() for k in PARAMS}}

    @classmethod
    def from_json(cls, data: dict) -> "MLPClassifier":
        model = cls(data["hidden"], data["epochs"], data["learning_rate"])
        model.params = {k: np.array(v, dtype=np.float64) for k, v in data["params"].items()}
        return model
