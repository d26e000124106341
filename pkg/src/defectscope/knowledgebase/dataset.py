"""The refinement transaction: shallow tables in, RefinedFeatures out."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import EmptyDataset
from .labels import ExposureThresholds, comment_totals, derive_labels, exposure_thresholds
from .refine import (
    Band,
    ScalingRecord,
    Selection,
    minmax_scale,
    normalize_by_length,
    quantize_array,
    select_candidates,
)
from .store import BUGS, FEATURES, MAPPING, REFINED, KnowledgeStore, RefinedRow


@dataclass
class RefinedDataset:
    rows: list[RefinedRow]
    selection: Selection
    scaling: ScalingRecord
    exposure: ExposureThresholds
    seed: int

    def matrix(self) -> np.ndarray:
        return np.array([r.values for r in self.rows], dtype=np.float64)


def build_refined_dataset(store: KnowledgeStore, band: Band | None = None, cap: int | None = None,
                          seed: int = 42) -> RefinedDataset:
    """select_candidates -> normalize_by_length -> minmax_scale -> derive_labels, then persist.

    Exposure tertiles come from every linked file in the store, not only
    the selected candidates. Values are quantized to the store precision so
    the returned rows equal what a later load returns.
    """
    files = [v for v in store.load(FEATURES) if v.scope == "file"]
    links = store.load(MAPPING)
    bugs = {b.key: b for b in store.load(BUGS)}
    store.validate()

    selection = select_candidates(files, band, cap, seed)
    if not selection.candidates:
        raise EmptyDataset("no candidate files survive the size band")

    totals = comment_totals(links, bugs)
    thresholds = exposure_thresholds(sorted(totals.values()))

    normalized = np.array([normalize_by_length(v) for v in selection.candidates])
    scaled, scaling = minmax_scale(normalized)
    scaled = quantize_array(scaled)

    by_file: dict[str, list] = {}
    for link in links:
        by_file.setdefault(link.file_id, []).append(link)
    rows = [
        RefinedRow(v.file_id, v.language, tuple(scaled[i].tolist()),
                   derive_labels(v.file_id, by_file.get(v.file_id, ()), bugs, thresholds))
        for i, v in enumerate(selection.candidates)
    ]
    store.persist(REFINED, rows)
    store.write_manifest({"refinement": {
        "seed": seed,
        "band": selection.band.to_json(),
        "cap": selection.cap,
        "available": selection.available,
        "selected": selection.selected,
        "empty_bands": [e.language for e in selection.empty_bands],
        "exposure_thresholds": [thresholds.low, thresholds.high],
        "scaling": scaling.to_json(),
        "rows": len(rows),
    }})
    return RefinedDataset(rows, selection, scaling, thresholds, seed)


def load_refined(store: KnowledgeStore) -> tuple[list[RefinedRow], ScalingRecord, dict]:
    manifest = store.manifest()
    info = manifest.get("refinement")
    if info is None:
        raise EmptyDataset("store has no refined dataset; run refinement first")
    return store.load(REFINED), ScalingRecord.from_json(info["scaling"]), info
