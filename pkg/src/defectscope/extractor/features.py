"""Per-file feature vectors, repository scanning and the feature CSV format."""

from __future__ import annotations

import csv
import hashlib
import json
import logging
import os
from collections.abc import Iterable, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO

import numpy as np

from ..errors import ParseFailure, SchemaMismatch
from .parser import DEFAULT_MAX_ERROR_FRACTION, decode_source, parse_file
from .stats import StatBlock, aggregate_stats, flatten
from .taxonomy import EXTENSIONS, FEATURE_COLUMNS, FEATURE_WIDTH, METRICS, normalize_language

log = logging.getLogger(__name__)

META_COLUMNS = ("file_id", "path", "language", "scope", "scope_id", "lines", "chars")
CSV_COLUMNS = META_COLUMNS + FEATURE_COLUMNS

WORKERS_ENV = "DEFECTSCOPE_WORKERS"


@dataclass(frozen=True)
class FeatureVector:
    file_id: str
    path: str
    language: str
    lines: int
    chars: int
    scope: str
    scope_id: str
    stats: tuple[StatBlock, ...]

    @property
    def repository(self) -> str:
        return self.path.split("/", 1)[0]

    def values(self) -> np.ndarray:
        return flatten(self.stats)


@dataclass
class SkipRecord:
    path: str
    reason: str
    detail: str = ""

    def to_json(self) -> str:
        return json.dumps({"path": self.path, "reason": self.reason}, sort_keys=False)


@dataclass
class ScanResult:
    vectors: list[FeatureVector] = field(default_factory=list)
    skipped: list[SkipRecord] = field(default_factory=list)

    def file_vectors(self) -> list[FeatureVector]:
        return [v for v in self.vectors if v.scope == "file"]


def make_file_id(relative_path: str) -> str:
    return hashlib.sha1(relative_path.encode("utf-8")).hexdigest()[:16]


def line_count(text: str) -> int:
    # newline count + 1 for nonempty files; empty files count as one line
    return text.count("\n") + 1 if text else 1


def features_from_text(
    text: str,
    language: str,
    relative_path: str,
    *,
    file_id: str | None = None,
    max_error_fraction: float = DEFAULT_MAX_ERROR_FRACTION,
) -> list[FeatureVector]:
    language = normalize_language(language)
    file_id = file_id or make_file_id(relative_path)
    observations = parse_file(text, language, max_error_fraction=max_error_fraction,
                              path=relative_path)
    lines = line_count(text)
    chars = max(1, len(text))

    def vector(scope: str, scope_id: str, obs) -> FeatureVector:
        return FeatureVector(file_id, relative_path, language, lines, chars, scope, scope_id,
                             aggregate_stats(obs, scope))

    out = [vector("file", "file", observations)]
    for scope, attr in (("class", "enclosing_class"), ("function", "enclosing_function")):
        groups: dict[str, list] = {}
        for obs in observations:
            sid = getattr(obs, attr)
            if sid is not None:
                groups.setdefault(sid, []).append(obs)
        # scope ids are "<scope>:<ordinal>"; order numerically
        for sid in sorted(groups, key=lambda s: int(s.split(":")[1])):
            out.append(vector(scope, sid, groups[sid]))
    return out


def extract_features(
    file_path: str | os.PathLike,
    language: str,
    *,
    relative_path: str | None = None,
    max_error_fraction: float = DEFAULT_MAX_ERROR_FRACTION,
) -> list[FeatureVector]:
    """File-scope vector followed by one vector per class and per function.

    ``relative_path`` names the file in the output (default: the path as
    given); the file id is derived from it.
    """
    path = Path(file_path)
    text = decode_source(path.read_bytes())
    rel = relative_path if relative_path is not None else path.as_posix()
    try:
        return features_from_text(text, language, rel, max_error_fraction=max_error_fraction)
    except ParseFailure as exc:
        if exc.path is None:
            exc.path = rel
        raise


def _scan_one(args: tuple[str, str, str, float]) -> tuple[str, list[FeatureVector] | SkipRecord]:
    full, rel, language, max_error_fraction = args
    try:
        return rel, extract_features(full, language, relative_path=rel,
                                     max_error_fraction=max_error_fraction)
    except ParseFailure as exc:
        return rel, SkipRecord(rel, "ParseFailure", str(exc))
    except OSError as exc:
        return rel, SkipRecord(rel, "IoError", str(exc))


def worker_count(default: int = 1) -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, default)))
    except ValueError:
        return default


def scan_repository(
    root: str | os.PathLike,
    languages: Iterable[str],
    *,
    workers: int | None = None,
    max_error_fraction: float = DEFAULT_MAX_ERROR_FRACTION,
) -> ScanResult:
    """Extract every file under ``root`` whose extension maps to a requested language.

    Paths are reported as ``<root name>/<path below root>``. Output is sorted
    by path, so it does not depend on traversal or completion order.
    """
    root = Path(root)
    if not root.is_dir():
        raise FileNotFoundError(f"repository root not found: {root}")
    wanted = {normalize_language(lang) for lang in languages}
    jobs = []
    for dirpath, dirnames, filenames in os.walk(root):
        dirnames.sort()
        for name in sorted(filenames):
            language = EXTENSIONS.get(os.path.splitext(name)[1].lower())
            if language not in wanted:
                continue
            full = os.path.join(dirpath, name)
            if os.path.islink(full) or not os.path.isfile(full):
                continue
            rel = Path(root.name, os.path.relpath(full, root)).as_posix()
            jobs.append((full, rel, language, max_error_fraction))

    workers = worker_count() if workers is None else workers
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(_scan_one, jobs, chunksize=8))
    else:
        outcomes = [_scan_one(job) for job in jobs]

    result = ScanResult()
    for rel, outcome in sorted(outcomes, key=lambda item: item[0]):
        if isinstance(outcome, SkipRecord):
            log.info("skipped %s: %s", rel, outcome.detail)
            result.skipped.append(outcome)
        else:
            result.vectors.extend(outcome)
    return result


def _fmt(value: float) -> str:
    return format(value, ".9g")


def vector_row(vector: FeatureVector) -> list[str]:
    meta = [vector.file_id, vector.path, vector.language, vector.scope, vector.scope_id,
            str(vector.lines), str(vector.chars)]
    return meta + [_fmt(v) for block in vector.stats for v in block.as_tuple()]


def write_features_csv(vectors: Iterable[FeatureVector], fh: IO[str]) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for vector in vectors:
        writer.writerow(vector_row(vector))


def _blocks_from_values(values: Sequence[float]) -> tuple[StatBlock, ...]:
    n = len(METRICS)
    return tuple(StatBlock(*values[i:i + n]) for i in range(0, FEATURE_WIDTH, n))


def read_features_csv(fh: IO[str]) -> list[FeatureVector]:
    reader = csv.reader(fh)
    header = next(reader, None)
    if header is None:
        return []
    if tuple(header) != CSV_COLUMNS:
        raise SchemaMismatch("feature CSV header does not match the construct taxonomy")
    out = []
    for row in reader:
        if len(row) != len(CSV_COLUMNS):
            raise SchemaMismatch(f"feature row has {len(row)} fields, expected {len(CSV_COLUMNS)}")
        file_id, path, language, scope, scope_id, lines, chars = row[:7]
        values = [float(x) for x in row[7:]]
        out.append(FeatureVector(file_id, path, language, int(lines), int(chars), scope,
                                 scope_id, _blocks_from_values(values)))
    return out


def write_skip_report(skipped: Iterable[SkipRecord], fh: IO[str]) -> None:
    for record in skipped:
        fh.write(record.to_json() + "\n")
