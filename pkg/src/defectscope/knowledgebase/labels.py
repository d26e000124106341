"""Phase-1 and phase-2 labels derived from a file's linked bug reports."""

from __future__ import annotations

from collections import Counter
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass

import numpy as np

from ..buglink import PRIORITY_RANK, BugRecord, FileBugLink

DEFECTIVE = "likely-to-be-defective"
UNPREDICTABLE = "unpredictable"
PHASE1_LABELS = (DEFECTIVE, UNPREDICTABLE)
PRIORITY_BUCKETS = ("Critical", "High", "Medium", "Low")
EXPOSURE_BUCKETS = ("low", "medium", "high")
CHARACTERISTICS = ("priority", "type", "os", "exposure")

# characteristic -> LabelSet attribute
CHARACTERISTIC_FIELDS = {
    "priority": "priority_bucket",
    "type": "bug_type",
    "os": "os_label",
    "exposure": "exposure_bucket",
}

_TYPE_TIE_ORDER = {"BugFix": 0, "Enhancement": 1, "Other": 2}


@dataclass(frozen=True)
class LabelSet:
    phase1: str
    priority_bucket: str | None = None
    bug_type: str | None = None
    os_label: str | None = None
    exposure_bucket: str | None = None

    def __post_init__(self) -> None:
        if self.phase1 not in PHASE1_LABELS:
            raise ValueError(f"unknown phase-1 label {self.phase1!r}")
        if self.phase1 == UNPREDICTABLE and any(
                getattr(self, f) is not None for f in CHARACTERISTIC_FIELDS.values()):
            raise ValueError("phase-2 labels require a likely-to-be-defective file")

    def characteristic(self, name: str) -> str | None:
        return getattr(self, CHARACTERISTIC_FIELDS[name])

    def to_dict(self) -> dict:
        out: dict = {"phase1": self.phase1}
        for name, attr in CHARACTERISTIC_FIELDS.items():
            value = getattr(self, attr)
            if value is not None:
                out[name] = value
        return out


@dataclass(frozen=True)
class ExposureThresholds:
    low: float = 0.0
    high: float = 0.0

    def bucket(self, total_comments: int) -> str:
        if total_comments <= self.low:
            return "low"
        if total_comments <= self.high:
            return "medium"
        return "high"


def exposure_thresholds(totals: Sequence[int]) -> ExposureThresholds:
    """Tertile cut points of per-file comment totals (linked files only)."""
    if len(totals) == 0:
        return ExposureThresholds()
    arr = np.asarray(totals, dtype=np.float64)
    low, high = np.percentile(arr, [100.0 / 3.0, 200.0 / 3.0])
    return ExposureThresholds(float(low), float(high))


def comment_totals(links: Iterable[FileBugLink], bugs: Mapping[tuple[str, str], BugRecord]) -> dict[str, int]:
    totals: dict[str, int] = {}
    for link in links:
        bug = bugs[(link.portal, link.bug_id)]
        totals[link.file_id] = totals.get(link.file_id, 0) + bug.comment_count
    return totals


def _majority(values: Sequence[str], tie_key) -> str:
    counts = Counter(values)
    return min(counts, key=lambda v: (-counts[v], tie_key(v)))


def derive_labels(
    file_id: str,
    links: Iterable[FileBugLink],
    bugs: Mapping[tuple[str, str], BugRecord] | Iterable[BugRecord],
    thresholds: ExposureThresholds | None = None,
) -> LabelSet:
    """Labels for one file from its links.

    Priority is the most severe known priority; when every linked bug is
    Unspecified the bucket stays absent. Type ties resolve to BugFix, then
    Enhancement. OS ties resolve lexicographically.
    """
    if not isinstance(bugs, Mapping):
        bugs = {b.key: b for b in bugs}
    linked = [bugs[(l.portal, l.bug_id)] for l in links if l.file_id == file_id]
    if not linked:
        return LabelSet(UNPREDICTABLE)
    known = [b.priority for b in linked if b.priority in PRIORITY_BUCKETS]
    priority = min(known, key=PRIORITY_RANK.__getitem__) if known else None
    bug_type = _majority([b.bug_type for b in linked], lambda v: _TYPE_TIE_ORDER.get(v, 3))
    os_label = _majority([b.os for b in linked], lambda v: v)
    thresholds = thresholds or ExposureThresholds()
    exposure = thresholds.bucket(sum(b.comment_count for b in linked))
    return LabelSet(DEFECTIVE, priority, bug_type, os_label, exposure)
