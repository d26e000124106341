"""Two-phase prediction: a defectiveness gate, then one model per characteristic."""

from __future__ import annotations

import json
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..errors import DataError, MissingPhase2Model, SchemaMismatch
from ..extractor import TAXONOMY_VERSION
from ..knowledgebase import CHARACTERISTIC_FIELDS, CHARACTERISTICS, DEFECTIVE, UNPREDICTABLE, LabelSet, RefinedRow, ScalingRecord
from ..learners import ModelConfig, TrainedModel, train

BUNDLE_FORMAT = 1


def phase1_dataset(rows: Sequence[RefinedRow]) -> tuple[np.ndarray, list[str]]:
    return np.array([r.values for r in rows], dtype=np.float64), [r.labels.phase1 for r in rows]


def phase2_dataset(rows: Sequence[RefinedRow], characteristic: str) -> tuple[np.ndarray, list[str]]:
    """Defective rows carrying a value for ``characteristic``."""
    if characteristic not in CHARACTERISTICS:
        raise ValueError(f"unknown characteristic {characteristic!r}; expected one of {CHARACTERISTICS}")
    keep = [r for r in rows if r.labels.phase1 == DEFECTIVE and r.labels.characteristic(characteristic) is not None]
    X = np.array([r.values for r in keep], dtype=np.float64).reshape(len(keep), -1)
    return X, [r.labels.characteristic(characteristic) for r in keep]


@dataclass
class TwoPhaseModel:
    phase1: TrainedModel | None
    phase2: dict[str, TrainedModel] = field(default_factory=dict)
    scaling: ScalingRecord | None = None
    seed: int = 42

    def to_json(self) -> dict:
        return {
            "format_version": BUNDLE_FORMAT,
            "seed": self.seed,
            "taxonomy_version": TAXONOMY_VERSION,
            "scaling": self.scaling.to_json() if self.scaling else None,
            "phase1": self.phase1.to_json() if self.phase1 else None,
            "phase2": {name: self.phase2[name].to_json() for name in sorted(self.phase2)},
        }

    @classmethod
    def from_json(cls, data: dict) -> "TwoPhaseModel":
        if data.get("format_version") != BUNDLE_FORMAT:
            raise SchemaMismatch(f"unsupported model bundle format {data.get('format_version')!r}")
        if data.get("taxonomy_version") != TAXONOMY_VERSION:
            raise SchemaMismatch(f"bundle taxonomy {data.get('taxonomy_version')!r} != {TAXONOMY_VERSION!r}")
        scaling = ScalingRecord.from_json(data["scaling"]) if data.get("scaling") else None
        phase1 = TrainedModel.from_json(data["phase1"]) if data.get("phase1") else None
        phase2 = {name: TrainedModel.from_json(m) for name, m in data.get("phase2", {}).items()}
        return cls(phase1, phase2, scaling, int(data.get("seed", 42)))

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_json(), sort_keys=True) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "TwoPhaseModel":
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise SchemaMismatch(f"{path} is not a model bundle: {exc}") from exc
        return cls.from_json(data)


def train_two_phase(rows: Sequence[RefinedRow], phase1_config: ModelConfig | None,
                    phase2_configs: Mapping[str, ModelConfig] | None = None,
                    scaling: ScalingRecord | None = None, seed: int = 42) -> TwoPhaseModel:
    """Train the gate and each requested characteristic model.

    Phase-2 models see only defective rows that carry the characteristic.
    """
    phase1 = None
    if phase1_config is not None:
        phase1 = train(phase1_config, *phase1_dataset(rows))
    phase2 = {}
    for name, config in sorted((phase2_configs or {}).items()):
        phase2[name] = train(config, *phase2_dataset(rows, name))
    return TwoPhaseModel(phase1, phase2, scaling, seed)


def two_phase_predict(tp: TwoPhaseModel, vector, characteristics: Iterable[str] | None = None) -> LabelSet:
    """Gate on phase 1; a defective verdict consults each requested phase-2 model.

    ``characteristics=None`` means every trained phase-2 model. Requested
    characteristics are checked before any prediction runs.
    """
    wanted = sorted(tp.phase2) if characteristics is None else list(characteristics)
    for name in wanted:
        if name not in CHARACTERISTICS:
            raise ValueError(f"unknown characteristic {name!r}")
        if name not in tp.phase2:
            raise MissingPhase2Model(name)
    if tp.phase1 is None:
        raise DataError("model bundle has no phase-1 model")
    verdict = tp.phase1.predict(vector).label
    if verdict != DEFECTIVE:
        return LabelSet(UNPREDICTABLE)
    fields = {}
    for name in wanted:
        fields[CHARACTERISTIC_FIELDS[name]] = tp.phase2[name].predict(vector).label
    return LabelSet(DEFECTIVE, **fields)
