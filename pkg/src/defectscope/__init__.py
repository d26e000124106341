"""Style-metric defect prediction: feature extraction, bug linking, refinement and two-phase models."""

from .extractor.taxonomy import TAXONOMY_VERSION

__version__ = "0.1.0"
SCHEMA_VERSION = "1"

__all__ = ["SCHEMA_VERSION", "TAXONOMY_VERSION", "__version__"]
