"""Size-band candidate selection, length normalization and min-max scaling."""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

import numpy as np

from ..extractor import FEATURE_WIDTH, LANGUAGES, FeatureVector, quantize

_LANGUAGE_ORDER = tuple(LANGUAGES)


@dataclass(frozen=True)
class Band:
    low: float
    high: float

    def __post_init__(self) -> None:
        if self.low > self.high:
            raise ValueError(f"band low {self.low} exceeds high {self.high}")

    def contains(self, lines: int) -> bool:
        return self.low <= lines <= self.high

    @classmethod
    def parse(cls, text: str) -> "Band":
        low, sep, high = text.partition(":")
        if not sep:
            raise ValueError(f"band must look like LOW:HIGH, got {text!r}")
        return cls(float(low), float(high))

    def to_json(self) -> list[float]:
        return [self.low, self.high]


@dataclass(frozen=True)
class EmptyBand:
    """No file of ``language`` survived the band filter (reported, not raised)."""

    language: str
    band: Band


@dataclass
class Selection:
    candidates: list[FeatureVector]
    band: Band
    cap: int
    available: dict[str, int] = field(default_factory=dict)
    selected: dict[str, int] = field(default_factory=dict)
    empty_bands: list[EmptyBand] = field(default_factory=list)


def default_band(files: Sequence[FeatureVector]) -> Band:
    """Inter-quartile range of the pooled line counts."""
    if not files:
        return Band(0.0, 0.0)
    low, high = np.percentile(np.array([f.lines for f in files], dtype=np.float64), [25.0, 75.0])
    return Band(float(low), float(high))


def select_candidates(
    files: Iterable[FeatureVector],
    band: Band | None = None,
    per_language_cap: int | None = None,
    seed: int = 42,
    languages: Iterable[str] | None = None,
) -> Selection:
    """Keep in-band files, then sample each language down to the cap.

    The default band is the pooled inter-quartile range of line counts and
    the default cap is the smallest nonzero per-language in-band count.
    Sampling is uniform without replacement from a per-language generator
    seeded by ``(seed, language index)`` over the path-sorted survivors, so
    the result does not depend on input order.
    """
    files = [f for f in files if f.scope == "file"]
    band = band or default_band(files)
    wanted = sorted(set(languages) if languages is not None else {f.language for f in files},
                    key=lambda lang: (_LANGUAGE_ORDER.index(lang) if lang in _LANGUAGE_ORDER else 99, lang))
    survivors = {lang: sorted((f for f in files if f.language == lang and band.contains(f.lines)),
                              key=lambda f: f.path)
                 for lang in wanted}
    available = {lang: len(v) for lang, v in survivors.items()}
    if per_language_cap is None:
        nonzero = [n for n in available.values() if n]
        cap = min(nonzero) if nonzero else 0
    else:
        if per_language_cap < 1:
            raise ValueError("per-language cap must be positive")
        cap = per_language_cap

    chosen: list[FeatureVector] = []
    selected: dict[str, int] = {}
    empty: list[EmptyBand] = []
    for lang in wanted:
        pool = survivors[lang]
        if not pool:
            empty.append(EmptyBand(lang, band))
            selected[lang] = 0
            continue
        if len(pool) > cap:
            index = _LANGUAGE_ORDER.index(lang) if lang in _LANGUAGE_ORDER else len(_LANGUAGE_ORDER)
            rng = np.random.default_rng([seed, index])
            picks = sorted(rng.choice(len(pool), size=cap, replace=False).tolist())
            pool = [pool[i] for i in picks]
        selected[lang] = len(pool)
        chosen.extend(pool)
    chosen.sort(key=lambda f: f.path)
    return Selection(chosen, band, cap, available, selected, empty)


def normalize_by_length(vector: FeatureVector | np.ndarray, lines: int | None = None) -> np.ndarray:
    """Divide every metric, depth and spread included, by the line count."""
    if isinstance(vector, FeatureVector):
        values, lines = vector.values(), vector.lines
    else:
        values = np.asarray(vector, dtype=np.float64)
    if lines is None or lines < 1:
        raise ValueError("line count must be at least 1")
    if values.shape[-1] != FEATURE_WIDTH:
        raise ValueError(f"expected {FEATURE_WIDTH} values, got {values.shape[-1]}")
    return values / float(lines)


@dataclass(frozen=True)
class ScalingRecord:
    mins: tuple[float, ...]
    maxs: tuple[float, ...]

    def apply(self, matrix: np.ndarray) -> np.ndarray:
        """Scale with training extrema; out-of-range inputs clamp to [0, 1]."""
        matrix = np.asarray(matrix, dtype=np.float64)
        lo = np.asarray(self.mins)
        span = np.asarray(self.maxs) - lo
        safe = np.where(span > 0, span, 1.0)
        scaled = np.where(span > 0, (matrix - lo) / safe, 0.0)
        return np.clip(scaled, 0.0, 1.0)

    def to_json(self) -> dict:
        return {"min": list(self.mins), "max": list(self.maxs)}

    @classmethod
    def from_json(cls, data: dict) -> "ScalingRecord":
        return cls(tuple(float(x) for x in data["min"]), tuple(float(x) for x in data["max"]))


def minmax_scale(matrix: np.ndarray) -> tuple[np.ndarray, ScalingRecord]:
    matrix = np.atleast_2d(np.asarray(matrix, dtype=np.float64))
    if matrix.shape[0] < 1:
        raise ValueError("min-max scaling needs at least one row")
    record = ScalingRecord(tuple(matrix.min(axis=0).tolist()), tuple(matrix.max(axis=0).tolist()))
    return record.apply(matrix), record


def quantize_array(values: np.ndarray) -> np.ndarray:
    return np.array([quantize(float(v)) for v in np.ravel(values)]).reshape(np.shape(values))


def refine_vector(vector: FeatureVector, scaling: ScalingRecord) -> np.ndarray:
    """Predict-time path: normalize, scale with the stored record, quantize."""
    return quantize_array(scaling.apply(normalize_by_length(vector)[None, :])[0])
