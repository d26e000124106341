"""Model configuration shared by every backend."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, fields, replace

ALGORITHMS = ("KNN", "RF", "LSVM", "MLP")
MULTICLASS = ("native", "ovr", "ovo")
DISTANCES = ("euclidean", "manhattan")
BINARY_ONLY = {"LSVM"}


@dataclass(frozen=True)
class ModelConfig:
    """Hyperparameters for one model. Only the fields of ``algorithm`` are read.

    Defaults: KNN k=5 euclidean; RF 10 trees with sqrt(d) features per node;
    LSVM penalty 1.0 over 200 epochs; MLP 64 hidden units, 500 epochs,
    learning rate 0.5; seed 42.

    ``rf_max_features`` is ``"sqrt"``, ``"log2"``, ``"all"``, an integer
    count, or a fraction in (0, 1]. ``multiclass="native"`` on the LSVM
    (binary only) falls back to one-vs-rest when there are more than two
    labels.
    """

    algorithm: str = "RF"
    multiclass: str = "native"
    knn_k: int = 5
    knn_distance: str = "euclidean"
    rf_estimators: int = 10
    rf_max_features: str | int | float = "sqrt"
    lsvm_penalty: float = 1.0
    lsvm_epochs: int = 200
    mlp_hidden: int = 64
    mlp_epochs: int = 500
    learning_rate: float = 0.5
    seed: int = 42

    def __post_init__(self) -> None:
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}; expected one of {ALGORITHMS}")
        if self.multiclass not in MULTICLASS:
            raise ValueError(f"unknown multiclass strategy {self.multiclass!r}")
        if self.knn_distance not in DISTANCES:
            raise ValueError(f"unknown distance {self.knn_distance!r}")
        for name in ("knn_k", "rf_estimators", "lsvm_epochs", "mlp_hidden", "mlp_epochs"):
            if int(getattr(self, name)) < 1:
                raise ValueError(f"{name} must be positive")
        if not self.lsvm_penalty > 0 or not self.learning_rate > 0:
            raise ValueError("penalty and learning rate must be positive")

    def max_features(self, width: int) -> int:
        rule = self.rf_max_features
        if rule == "sqrt":
            m = int(math.sqrt(width))
        elif rule == "log2":
            m = int(math.log2(width)) if width > 1 else 1
        elif rule == "all":
            m = width
        elif isinstance(rule, float) and rule <= 1:
            m = int(rule * width)
        else:
            m = int(rule)
        return max(1, min(width, m))

    def relevant(self) -> dict:
        """The fields this algorithm reads, for display and ranking keys."""
        keep = {"KNN": ("knn_k", "knn_distance"),
                "RF": ("rf_estimators", "rf_max_features"),
                "LSVM": ("lsvm_penalty", "lsvm_epochs"),
                "MLP": ("mlp_hidden", "mlp_epochs", "learning_rate")}[self.algorithm]
        out = {k: getattr(self, k) for k in keep}
        if self.multiclass != "native" or self.algorithm in BINARY_ONLY:
            out["multiclass"] = self.multiclass
        return out

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "ModelConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown model config fields: {sorted(unknown)}")
        return cls(**data)

    def with_seed(self, seed: int) -> "ModelConfig":
        return replace(self, seed=seed)
