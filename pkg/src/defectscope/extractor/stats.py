"""Aggregate construct observations into the 12-metric blocks per kind."""

from __future__ import annotations

from collections import defaultdict
from collections.abc import Iterable, Sequence
from dataclasses import astuple, dataclass

import numpy as np

from .parser import ConstructObservation
from .taxonomy import CONSTRUCT_KINDS

SCOPES = ("file", "class", "function")


def quantize(value: float) -> float:
    """Round to the store's canonical precision of 9 significant digits."""
    return float(format(value, ".9g"))


@dataclass(frozen=True, slots=True)
class StatBlock:
    maxCount: float = 0.0
    minCount: float = 0.0
    avgCount: float = 0.0
    stdDevCount: float = 0.0
    maxDepth: float = 0.0
    minDepth: float = 0.0
    avgDepth: float = 0.0
    stdDevDepth: float = 0.0
    maxLength: float = 0.0
    minLength: float = 0.0
    avgLength: float = 0.0
    stdDevLength: float = 0.0

    def as_tuple(self) -> tuple[float, ...]:
        return astuple(self)


ZERO_BLOCK = StatBlock()


def _summary(sample: Sequence[float]) -> tuple[float, float, float, float]:
    if not sample:
        return (0.0, 0.0, 0.0, 0.0)
    arr = np.asarray(sample, dtype=np.float64)
    return (float(arr.max()), float(arr.min()), float(arr.mean()), float(arr.std()))


def aggregate_stats(
    observations: Iterable[ConstructObservation], scope: str = "file"
) -> tuple[StatBlock, ...]:
    """One StatBlock per construct kind, in taxonomy order.

    At file scope the Count metrics summarize per-region occurrence counts,
    where a region is a top-level function or class, plus the remaining
    file-level code when it holds any construct. At class and function scope
    the count sample is the single scope total. Depth and Length metrics
    always summarize the raw per-occurrence values.
    """
    if scope not in SCOPES:
        raise ValueError(f"unknown scope {scope!r}")
    depths: dict[int, list[int]] = defaultdict(list)
    lengths: dict[int, list[int]] = defaultdict(list)
    # region -> kind id -> count
    per_region: dict[str | None, dict[int, int]] = defaultdict(lambda: defaultdict(int))
    for obs in observations:
        kid = obs.kind.id
        depths[kid].append(obs.depth)
        lengths[kid].append(obs.length)
        region = obs.region if scope == "file" else scope
        per_region[region][kid] += 1

    blocks = []
    for kind in CONSTRUCT_KINDS:
        if not depths.get(kind.id):
            blocks.append(ZERO_BLOCK)
            continue
        counts = [counts_by_kind.get(kind.id, 0) for counts_by_kind in per_region.values()]
        values = _summary(counts) + _summary(depths[kind.id]) + _summary(lengths[kind.id])
        blocks.append(StatBlock(*(quantize(v) for v in values)))
    return tuple(blocks)


def flatten(blocks: Sequence[StatBlock]) -> np.ndarray:
    return np.array([v for block in blocks for v in block.as_tuple()], dtype=np.float64)
