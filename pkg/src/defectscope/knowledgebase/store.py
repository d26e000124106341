"""Directory-backed store for the five knowledge tables plus a JSON manifest."""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass
from pathlib import Path

from .. import SCHEMA_VERSION
from ..buglink import (
    BugRecord,
    FileBugLink,
    read_bugs_csv,
    read_links_csv,
    write_bugs_csv,
    write_links_csv,
)
from ..errors import IntegrityViolation, SchemaMismatch
from ..extractor import (
    CONSTRUCT_KINDS,
    FEATURE_COLUMNS,
    METRICS,
    TAXONOMY_VERSION,
    ConstructKind,
    FeatureVector,
    quantize,
    read_features_csv,
    write_features_csv,
)
from .labels import CHARACTERISTIC_FIELDS, LabelSet

FEATURES = "source_code_features"
BUGS = "bug_info"
MAPPING = "source_file_to_bug_mapping"
CONSTRUCTS = "language_constructs"
REFINED = "refined_features"
TABLES = (FEATURES, BUGS, MAPPING, CONSTRUCTS, REFINED)

_ALIASES = {
    "SourceCodeFeatures": FEATURES,
    "BugInfo": BUGS,
    "SourceFileToBugMapping": MAPPING,
    "LanguageConstructs": CONSTRUCTS,
    "RefinedFeatures": REFINED,
}

MANIFEST = "manifest.json"
SKIP_REPORT = "skip_report.jsonl"
REJECTIONS = "bug_rejections.jsonl"
LINK_REPORT = "link_report.jsonl"
COVERAGE_CSV = "coverage.csv"
COVERAGE_MD = "coverage.md"

LABEL_COLUMNS = ("phase1",) + tuple(CHARACTERISTIC_FIELDS.values())
REFINED_COLUMNS = ("file_id", "language") + LABEL_COLUMNS + FEATURE_COLUMNS


@dataclass(frozen=True)
class RefinedRow:
    file_id: str
    language: str
    values: tuple[float, ...]
    labels: LabelSet


def table_id(name: str) -> str:
    name = _ALIASES.get(name, name)
    if name not in TABLES:
        raise SchemaMismatch(f"unknown table {name!r}; expected one of {', '.join(TABLES)}")
    return name


def atomic_write(path: Path, write: Callable[[io.TextIOBase], None]) -> None:
    """Write to a sibling temporary file, then rename over ``path``."""
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            write(fh)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _write_constructs(rows: Sequence[ConstructKind], fh) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(("id", "name"))
    for k in rows:
        writer.writerow((k.id, k.name))


def _read_constructs(fh) -> list[ConstructKind]:
    reader = csv.reader(fh)
    header = next(reader, None)
    if header is None:
        return []
    if header != ["id", "name"]:
        raise SchemaMismatch("construct table header mismatch")
    return [ConstructKind(int(i), name) for i, name in reader]


def _fmt(value: float) -> str:
    return format(value, ".9g")


def _write_refined(rows: Sequence[RefinedRow], fh) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(REFINED_COLUMNS)
    for r in rows:
        labels = [getattr(r.labels, c) or "" for c in LABEL_COLUMNS]
        writer.writerow([r.file_id, r.language, *labels, *(_fmt(v) for v in r.values)])


def _read_refined(fh) -> list[RefinedRow]:
    reader = csv.reader(fh)
    header = next(reader, None)
    if header is None:
        return []
    if tuple(header) != REFINED_COLUMNS:
        raise SchemaMismatch("refined table header mismatch")
    n_meta = 2 + len(LABEL_COLUMNS)
    out = []
    for row in reader:
        if len(row) != len(REFINED_COLUMNS):
            raise SchemaMismatch(f"refined row has {len(row)} fields, expected {len(REFINED_COLUMNS)}")
        labels = LabelSet(*(v or None for v in row[2:n_meta]))
        out.append(RefinedRow(row[0], row[1], tuple(float(v) for v in row[n_meta:]), labels))
    return out


_WRITERS = {
    FEATURES: write_features_csv,
    BUGS: write_bugs_csv,
    MAPPING: write_links_csv,
    CONSTRUCTS: _write_constructs,
    REFINED: _write_refined,
}
_READERS = {
    FEATURES: read_features_csv,
    BUGS: read_bugs_csv,
    MAPPING: read_links_csv,
    CONSTRUCTS: _read_constructs,
    REFINED: _read_refined,
}
# tables whose rows point into the keyed table
_DEPENDENTS = {FEATURES: (MAPPING, REFINED), BUGS: (MAPPING,)}


class KnowledgeStore:
    """The five tables as CSV files in one directory, with ``manifest.json``.

    Writes are whole-table and atomic. Referential integrity is checked on
    every persist: mapping rows must reference stored files and bugs, refined
    rows stored files, and feature columns the registered construct ids.
    """

    def __init__(self, root: str | os.PathLike) -> None:
        self.root = Path(root)

    # ------------------------------------------------------------ files
    def path(self, name: str) -> Path:
        return self.root / f"{table_id(name)}.csv"

    def exists(self, name: str) -> bool:
        return self.path(name).exists()

    def init(self) -> "KnowledgeStore":
        self.root.mkdir(parents=True, exist_ok=True)
        if not self.exists(CONSTRUCTS):
            self.persist(CONSTRUCTS, CONSTRUCT_KINDS)
        if not (self.root / MANIFEST).exists():
            self.write_manifest({})
        return self

    # ------------------------------------------------------------ manifest
    def manifest(self) -> dict:
        path = self.root / MANIFEST
        if not path.exists():
            return {"schema_version": SCHEMA_VERSION, "taxonomy_version": TAXONOMY_VERSION}
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
        if data.get("schema_version") != SCHEMA_VERSION:
            raise SchemaMismatch(f"store schema {data.get('schema_version')!r}, expected {SCHEMA_VERSION!r}")
        if data.get("taxonomy_version") != TAXONOMY_VERSION:
            raise SchemaMismatch(f"store taxonomy {data.get('taxonomy_version')!r}, "
                                 f"expected {TAXONOMY_VERSION!r}")
        return data

    def write_manifest(self, updates: dict, *, drop: Iterable[str] = ()) -> dict:
        data = self.manifest()
        for key in drop:
            data.pop(key, None)
        data.update(updates)
        data["schema_version"] = SCHEMA_VERSION
        data["taxonomy_version"] = TAXONOMY_VERSION
        text = json.dumps(data, indent=2, sort_keys=True) + "\n"
        atomic_write(self.root / MANIFEST, lambda fh: fh.write(text))
        return data

    # ------------------------------------------------------------ tables
    def load(self, name: str) -> list:
        name = table_id(name)
        path = self.path(name)
        if not path.exists():
            return []
        with open(path, encoding="utf-8", newline="") as fh:
            return _READERS[name](fh)

    def persist(self, name: str, rows: Iterable, *, cascade: bool = False) -> int:
        """Replace one table. Returns the number of rows written.

        Replacing features or bugs would orphan mapping and refined rows;
        that raises IntegrityViolation unless ``cascade`` clears the
        dependent tables.
        """
        name = table_id(name)
        rows = list(rows)
        self._check_schema(name, rows)
        self._check_references(name, rows)
        if name in _DEPENDENTS:
            self._check_dependents(name, rows, cascade)
        self.root.mkdir(parents=True, exist_ok=True)
        atomic_write(self.path(name), lambda fh: _WRITERS[name](rows, fh))
        return len(rows)

    def clear(self, name: str) -> None:
        path = self.path(name)
        if path.exists():
            path.unlink()

    # ------------------------------------------------------------ checks
    def _check_schema(self, name: str, rows: list) -> None:
        expected = {FEATURES: FeatureVector, BUGS: BugRecord, MAPPING: FileBugLink,
                    CONSTRUCTS: ConstructKind, REFINED: RefinedRow}[name]
        for row in rows:
            if not isinstance(row, expected):
                raise SchemaMismatch(f"{name} rows must be {expected.__name__}, got {type(row).__name__}")
        if name == FEATURES:
            for v in rows:
                if len(v.stats) != len(CONSTRUCT_KINDS):
                    raise SchemaMismatch(f"feature vector for {v.path} has {len(v.stats)} blocks")
                if v.lines < 1 or v.chars < 1:
                    raise SchemaMismatch(f"feature vector for {v.path} has non-positive length")
        if name == REFINED:
            for r in rows:
                if len(r.values) != len(FEATURE_COLUMNS):
                    raise SchemaMismatch(f"refined row {r.file_id} has {len(r.values)} values")
                if any(quantize(v) != v for v in r.values):
                    raise SchemaMismatch(f"refined row {r.file_id} is not quantized to 9 digits")
        if name == BUGS:
            keys = [b.key for b in rows]
            if len(set(keys)) != len(keys):
                raise IntegrityViolation("duplicate (portal, bug_id) in bug table")
        if name == MAPPING:
            pairs = [(l.file_id, l.portal, l.bug_id) for l in rows]
            if len(set(pairs)) != len(pairs):
                raise IntegrityViolation("more than one link for a (file, bug) pair")

    def _construct_ids_ok(self) -> None:
        registered = self.load(CONSTRUCTS) if self.exists(CONSTRUCTS) else list(CONSTRUCT_KINDS)
        names = {f"{k.name}_{m}" for k in registered for m in METRICS}
        missing = [c for c in FEATURE_COLUMNS if c not in names]
        if missing:
            raise IntegrityViolation(f"feature columns without a registered construct: {missing[:3]}")

    def _check_references(self, name: str, rows: list) -> None:
        if name == FEATURES:
            self._construct_ids_ok()
        if name == MAPPING:
            files = {v.file_id for v in self.load(FEATURES) if v.scope == "file"}
            bugs = {b.key for b in self.load(BUGS)}
            for link in rows:
                if link.file_id not in files:
                    raise IntegrityViolation(f"link references unknown file {link.file_id}")
                if (link.portal, link.bug_id) not in bugs:
                    raise IntegrityViolation(f"link references unknown bug {link.portal}/{link.bug_id}")
        if name == REFINED:
            files = {v.file_id for v in self.load(FEATURES) if v.scope == "file"}
            for r in rows:
                if r.file_id not in files:
                    raise IntegrityViolation(f"refined row references unknown file {r.file_id}")

    def _check_dependents(self, name: str, rows: list, cascade: bool) -> None:
        if name == FEATURES:
            keys = {v.file_id for v in rows if v.scope == "file"}
            orphan = any(l.file_id not in keys for l in self.load(MAPPING)) or \
                any(r.file_id not in keys for r in self.load(REFINED))
        else:
            keys = {b.key for b in rows}
            orphan = any((l.portal, l.bug_id) not in keys for l in self.load(MAPPING))
        if not orphan:
            return
        if not cascade:
            raise IntegrityViolation(f"replacing {name} would orphan rows in "
                                     f"{', '.join(_DEPENDENTS[name])}")
        for dep in _DEPENDENTS[name]:
            self.clear(dep)
            if dep == MAPPING and REFINED not in _DEPENDENTS[name]:
                self.clear(REFINED)
        self.write_manifest({}, drop=("refinement",))

    def validate(self) -> None:
        """Re-check integrity of everything currently stored."""
        self._construct_ids_ok()
        for name in (MAPPING, REFINED):
            self._check_references(name, self.load(name))
