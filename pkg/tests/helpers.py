"""Shared builders: hand-made feature vectors and the synthetic end-to-end pipeline."""

from __future__ import annotations

from pathlib import Path

import numpy as np

from defectscope.buglink import FileIndex, build_link_table, ingest_bug_reports
from defectscope.extractor import CONSTRUCT_KINDS, LANGUAGES, FeatureVector, quantize, scan_repository
from defectscope.extractor.features import make_file_id
from defectscope.extractor.stats import StatBlock
from defectscope.knowledgebase import BUGS, FEATURES, MAPPING, KnowledgeStore, build_refined_dataset
from defectscope.synthetic import generate_corpus

WIDTH = 12 * len(CONSTRUCT_KINDS)


def make_vector(path: str, language: str, lines: int, values=None) -> FeatureVector:
    values = np.zeros(WIDTH) if values is None else np.asarray(values, dtype=np.float64)
    blocks = tuple(StatBlock(*(quantize(float(v)) for v in values[i:i + 12])) for i in range(0, WIDTH, 12))
    return FeatureVector(make_file_id(path), path, language, lines, max(1, lines * 10), "file",
                         make_file_id(path), blocks)


def random_vectors(n_per_language: int, rng: np.random.Generator, lines=(10, 60)) -> list[FeatureVector]:
    out = []
    for lang in LANGUAGES:
        for i in range(n_per_language):
            out.append(make_vector(f"repo/{lang}/f{i:04d}", lang, int(rng.integers(*lines, endpoint=True)),
                                   rng.integers(0, 20, size=WIDTH)))
    return out


def synthetic_pipeline(tmp: Path, seed: int = 42, **corpus_kwargs):
    """Generate -> extract -> ingest -> link -> refine. Returns (corpus, store, dataset)."""
    corpus = generate_corpus(tmp / "corpus", seed=seed, **corpus_kwargs)
    vectors = []
    for repo in corpus.repositories:
        vectors += scan_repository(repo, set(LANGUAGES)).vectors
    bugs = ingest_bug_reports(corpus.bugs_path.read_text(encoding="utf-8").splitlines()).records
    table = build_link_table(bugs, FileIndex.from_vectors(vectors))
    store = KnowledgeStore(tmp / "store").init()
    store.persist(FEATURES, vectors)
    store.persist(BUGS, bugs)
    store.persist(MAPPING, table.links)
    return corpus, store, build_refined_dataset(store, seed=seed)
