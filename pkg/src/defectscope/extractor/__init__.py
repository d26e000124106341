from .features import (
    CSV_COLUMNS,
    FeatureVector,
    ScanResult,
    SkipRecord,
    extract_features,
    features_from_text,
    line_count,
    make_file_id,
    read_features_csv,
    scan_repository,
    write_features_csv,
    write_skip_report,
)
from .parser import ConstructObservation, parse_file
from .stats import StatBlock, aggregate_stats, flatten, quantize
from .taxonomy import (
    CONSTRUCT_KINDS,
    EXTENSIONS,
    FEATURE_COLUMNS,
    FEATURE_WIDTH,
    LANGUAGES,
    METRICS,
    TAXONOMY_VERSION,
    ConstructKind,
    normalize_language,
)

__all__ = [
    "CONSTRUCT_KINDS", "CSV_COLUMNS", "EXTENSIONS", "FEATURE_COLUMNS", "FEATURE_WIDTH",
    "LANGUAGES", "METRICS", "TAXONOMY_VERSION", "ConstructKind", "ConstructObservation",
    "FeatureVector", "ScanResult", "SkipRecord", "StatBlock", "aggregate_stats",
    "extract_features", "features_from_text", "flatten", "line_count", "make_file_id",
    "normalize_language", "parse_file", "quantize", "read_features_csv", "scan_repository",
    "write_features_csv", "write_skip_report",
]
