"""Evaluate a keyed set of configurations and rank them."""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ..learners import ModelConfig
from .cv import EvalReport, cross_validate


@dataclass(frozen=True)
class RankingRow:
    rank: int
    key: str
    algorithm: str
    params: dict
    mean_f1: float
    std_f1: float
    mean_precision: float
    mean_recall: float
    best: bool
    worst: bool


@dataclass
class Comparison:
    reports: dict[str, EvalReport]
    ranking: list[RankingRow]
    k: int
    seed: int


def rank_reports(reports: Mapping[str, EvalReport]) -> list[RankingRow]:
    """Sort by mean F1 descending, then lower stddev, then key.

    Every row tied with the top (or bottom) on mean F1 and stddev carries
    the best (or worst) flag.
    """
    ordered = sorted(reports.values(), key=lambda r: (-r.mean_f1, r.std_f1, r.key))
    if not ordered:
        return []
    top = (ordered[0].mean_f1, ordered[0].std_f1)
    bottom = (ordered[-1].mean_f1, ordered[-1].std_f1)
    return [RankingRow(i + 1, r.key, r.config.algorithm, r.config.relevant(), r.mean_f1, r.std_f1,
                       r.mean_precision, r.mean_recall,
                       (r.mean_f1, r.std_f1) == top, (r.mean_f1, r.std_f1) == bottom)
            for i, r in enumerate(ordered)]


def compare_models(configs: Mapping[str, ModelConfig], X: np.ndarray, y: Sequence[str], k: int = 5,
                   seed: int = 42, workers: int | None = None) -> Comparison:
    if not configs:
        raise ValueError("compare_models needs at least one configuration")
    keys = sorted(configs)

    def run(key: str) -> EvalReport:
        return cross_validate(configs[key], X, y, k, seed, key=key)

    if workers and workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            results = list(pool.map(run, keys))
    else:
        results = [run(key) for key in keys]
    reports = dict(zip(keys, results))
    return Comparison(reports, rank_reports(reports), k, seed)
