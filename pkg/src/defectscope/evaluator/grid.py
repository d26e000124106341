"""Model grids: keyed configuration sets shipped as JSON."""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from ..errors import SchemaMismatch
from ..learners import ModelConfig

BUILTIN = {"phase1": "phase1.json", "phase2": "phase2.json"}


@dataclass(frozen=True)
class GridEntry:
    key: str
    descriptor: str
    config: ModelConfig | None
    reason: str | None = None
    duplicate_of: str | None = None
    note: str | None = None

    @property
    def skipped(self) -> bool:
        return self.config is None


@dataclass(frozen=True)
class Grid:
    phase: int
    entries: tuple[GridEntry, ...]

    def implemented(self) -> dict[str, ModelConfig]:
        return {e.key: e.config for e in self.entries if e.config is not None}

    def skipped(self) -> list[GridEntry]:
        return [e for e in self.entries if e.config is None]

    def get(self, key: str) -> GridEntry:
        for e in self.entries:
            if e.key == key:
                return e
        raise KeyError(f"no grid key {key!r}")


def parse_grid(data: dict, seed: int = 42) -> Grid:
    try:
        phase = int(data["phase"])
        raw = data["entries"]
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaMismatch(f"grid document needs 'phase' and 'entries': {exc}") from exc
    entries, seen = [], set()
    for item in raw:
        key = str(item["key"])
        if key in seen:
            raise SchemaMismatch(f"duplicate grid key {key!r}")
        seen.add(key)
        if item.get("skipped"):
            entries.append(GridEntry(key, item.get("descriptor", ""), None, item.get("reason", "skipped"),
                                     item.get("duplicate_of"), item.get("note")))
            continue
        try:
            config = ModelConfig(algorithm=item["algorithm"], seed=seed, **item.get("params", {}))
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaMismatch(f"grid key {key!r}: {exc}") from exc
        entries.append(GridEntry(key, item.get("descriptor", ""), config, None,
                                 item.get("duplicate_of"), item.get("note")))
    return Grid(phase, tuple(entries))


def load_grid(source: str | Path, seed: int = 42) -> Grid:
    """Load ``phase1``/``phase2`` (the shipped grids) or a grid JSON file."""
    name = str(source)
    if name in BUILTIN:
        text = resources.files("defectscope").joinpath("grids", BUILTIN[name]).read_text("utf-8")
    else:
        text = Path(source).read_text("utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaMismatch(f"grid {name} is not valid JSON: {exc}") from exc
    return parse_grid(data, seed)
