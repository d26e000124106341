from .dataset import RefinedDataset, build_refined_dataset, load_refined
from .labels import (
    CHARACTERISTIC_FIELDS,
    CHARACTERISTICS,
    DEFECTIVE,
    EXPOSURE_BUCKETS,
    PHASE1_LABELS,
    PRIORITY_BUCKETS,
    UNPREDICTABLE,
    ExposureThresholds,
    LabelSet,
    comment_totals,
    derive_labels,
    exposure_thresholds,
)
from .refine import (
    Band,
    EmptyBand,
    ScalingRecord,
    Selection,
    default_band,
    minmax_scale,
    normalize_by_length,
    refine_vector,
    select_candidates,
)
from .store import (
    BUGS,
    CONSTRUCTS,
    FEATURES,
    MAPPING,
    REFINED,
    TABLES,
    KnowledgeStore,
    RefinedRow,
)

__all__ = [
    "BUGS", "CHARACTERISTICS", "CHARACTERISTIC_FIELDS", "CONSTRUCTS", "DEFECTIVE", "EXPOSURE_BUCKETS",
    "FEATURES", "MAPPING", "PHASE1_LABELS", "PRIORITY_BUCKETS", "REFINED", "TABLES", "UNPREDICTABLE",
    "Band", "EmptyBand", "ExposureThresholds", "KnowledgeStore", "LabelSet", "RefinedDataset",
    "RefinedRow", "ScalingRecord", "Selection", "build_refined_dataset", "comment_totals",
    "default_band", "derive_labels", "exposure_thresholds", "load_refined", "minmax_scale",
    "normalize_by_length", "refine_vector", "select_candidates",
]
