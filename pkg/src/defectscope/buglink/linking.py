"""File mentions in bug reports, path matching, and the file-to-bug link table."""

from __future__ import annotations

import csv
import json
import posixpath
import re
from collections import defaultdict
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from typing import IO

from ..errors import SchemaMismatch
from .records import BugRecord

EVIDENCE = ("patch-path", "patch-basename", "summary-mention")

# Longer extensions first so ".cpp" is not read as ".c" plus junk.
_EXT = r"(?:cpp|hpp|java|cc|py|c|h)"
MENTION_RE = re.compile(r"(?<![\w./\\-])((?:[\w.-]+/)*[\w-][\w.-]*\." + _EXT + r")(?![\w-])")
_HEADER_RE = re.compile(r"^(?:(?:---|\+\+\+) |Index: |diff --git )(.*)$", re.MULTILINE)


@dataclass(frozen=True)
class Mention:
    candidate: str
    evidence: str
    matched_string: str


@dataclass(frozen=True)
class FileBugLink:
    file_id: str
    bug_id: str
    evidence: str
    matched_string: str
    portal: str = ""


@dataclass(frozen=True)
class MentionIssue:
    """A candidate that produced no link: ``ambiguous`` or ``unmatched``."""

    portal: str
    bug_id: str
    candidate: str
    status: str
    matches: tuple[str, ...] = ()

    def to_json(self) -> str:
        return json.dumps({"portal": self.portal, "bug_id": self.bug_id, "candidate": self.candidate,
                           "status": self.status, "matches": list(self.matches)})


def _header_paths(patch: str) -> list[str] | None:
    """Paths named by unified-diff headers; None when the patch has no headers."""
    found = _HEADER_RE.findall(patch)
    if not found:
        return None
    paths = []
    for rest in found:
        if rest.startswith("a/") and " b/" in rest and not rest.startswith("a/ "):
            # diff --git a/X b/Y
            left, right = rest.split(" b/", 1)
            parts = [left, "b/" + right]
        else:
            parts = [rest.split("\t", 1)[0].rstrip()]
        for part in parts:
            if part == "/dev/null" or not part:
                continue
            if part[:2] in ("a/", "b/"):
                part = part[2:]
            paths.append(part)
    return paths


def _scan(text: str) -> list[str]:
    return [m.group(1) for m in MENTION_RE.finditer(text)]


def _candidate(token: str) -> str:
    while token.startswith(("./", "../")):
        token = token.split("/", 1)[1]
    return token


def extract_file_mentions(bug: BugRecord) -> list[Mention]:
    """Candidate source-file mentions, patch-derived first, deduplicated in order.

    Patches with diff headers contribute the header paths only; header-less
    patches are scanned for path-like tokens. The summary is consulted only
    when there is no patch text at all.
    """
    tokens: list[tuple[str, str | None]] = []
    if bug.patch_text:
        headers = _header_paths(bug.patch_text)
        if headers is None:
            tokens = [(t, None) for t in _scan(bug.patch_text)]
        else:
            for path in headers:
                full = MENTION_RE.fullmatch(path)
                if full:
                    tokens.append((path, None))
        source = "patch"
    else:
        tokens = [(t, "summary-mention") for t in _scan(bug.summary)]
        source = "summary"

    out: list[Mention] = []
    seen: set[str] = set()
    for token, evidence in tokens:
        cand = _candidate(token)
        if not cand or cand in seen:
            continue
        seen.add(cand)
        if source == "patch":
            evidence = "patch-path" if "/" in cand else "patch-basename"
        out.append(Mention(cand, evidence, token))
    return out


@dataclass(frozen=True)
class IndexedFile:
    file_id: str
    path: str
    language: str = ""

    @property
    def repository(self) -> str:
        return self.path.split("/", 1)[0]


class FileIndex:
    """Read-only lookup over extracted file paths (``<repo>/<relative path>``)."""

    def __init__(self, files: Iterable[IndexedFile]) -> None:
        self.files: tuple[IndexedFile, ...] = tuple(sorted(files, key=lambda f: f.path))
        self._by_base: dict[str, list[IndexedFile]] = defaultdict(list)
        for f in self.files:
            self._by_base[posixpath.basename(f.path)].append(f)

    @classmethod
    def from_vectors(cls, vectors) -> "FileIndex":
        return cls(IndexedFile(v.file_id, v.path, v.language) for v in vectors if v.scope == "file")

    def __len__(self) -> int:
        return len(self.files)

    def by_basename(self, name: str) -> list[IndexedFile]:
        return list(self._by_base.get(name, ()))

    def by_suffix(self, candidate: str) -> list[IndexedFile]:
        base = posixpath.basename(candidate)
        tail = "/" + candidate
        return [f for f in self._by_base.get(base, ()) if f.path == candidate or f.path.endswith(tail)]


@dataclass
class MatchResult:
    links: list[FileBugLink] = field(default_factory=list)
    ambiguous: list[MentionIssue] = field(default_factory=list)
    unmatched: list[MentionIssue] = field(default_factory=list)


def match_mentions(candidates: Sequence[Mention], file_index: FileIndex, *,
                   bug_id: str = "", portal: str = "") -> MatchResult:
    """Resolve mentions against the index.

    A candidate with directory components links every file whose path ends
    with it on a component boundary. A bare basename links only when exactly
    one indexed file has that name. The first mention to reach a file wins.
    """
    result = MatchResult()
    linked: set[str] = set()
    for m in candidates:
        if "/" in m.candidate:
            hits = file_index.by_suffix(m.candidate)
        else:
            hits = file_index.by_basename(m.candidate)
            if len(hits) > 1:
                result.ambiguous.append(MentionIssue(portal, bug_id, m.candidate, "ambiguous",
                                                     tuple(h.path for h in hits)))
                continue
        if not hits:
            result.unmatched.append(MentionIssue(portal, bug_id, m.candidate, "unmatched"))
            continue
        for hit in hits:
            if hit.file_id in linked:
                continue
            linked.add(hit.file_id)
            result.links.append(FileBugLink(hit.file_id, bug_id, m.evidence, m.matched_string, portal))
    return result


COVERAGE_COLUMNS = ("group", "name", "total_files", "linked_files", "total_bugs", "covered_bugs")


@dataclass(frozen=True)
class CoverageRow:
    group: str
    name: str
    total_files: int
    linked_files: int
    total_bugs: int
    covered_bugs: int


@dataclass
class LinkTable:
    links: list[FileBugLink]
    ambiguous: list[MentionIssue]
    unmatched: list[MentionIssue]
    coverage: list[CoverageRow]

    def issues(self) -> list[MentionIssue]:
        return self.ambiguous + self.unmatched


def _coverage(bugs: Sequence[BugRecord], index: FileIndex, links: Sequence[FileBugLink],
              touched: dict[tuple[str, str], set[str]]) -> list[CoverageRow]:
    """Coverage per repository, per language and overall.

    For a group, ``total_bugs`` counts bugs whose mentions resolved to at
    least one file of the group (linked or ambiguous) and ``covered_bugs``
    those with at least one link into it. The overall row counts every
    ingested bug.
    """
    by_id = {f.file_id: f for f in index.files}
    linked_files: set[str] = {l.file_id for l in links}
    links_by_bug: dict[tuple[str, str], set[str]] = defaultdict(set)
    for l in links:
        links_by_bug[(l.portal, l.bug_id)].add(l.file_id)

    def row(group: str, name: str, members: set[str], all_bugs: bool) -> CoverageRow:
        covered = sum(1 for fids in links_by_bug.values() if fids & members)
        if all_bugs:
            total_bugs = len(bugs)
        else:
            total_bugs = sum(1 for fids in touched.values() if fids & members)
        return CoverageRow(group, name, len(members), len(members & linked_files), total_bugs, covered)

    rows = [row("all", "all", set(by_id), True)]
    for group, attr in (("repository", "repository"), ("language", "language")):
        members: dict[str, set[str]] = defaultdict(set)
        for f in index.files:
            members[getattr(f, attr)].add(f.file_id)
        for name in sorted(members):
            rows.append(row(group, name, members[name], False))
    return rows


def build_link_table(bugs: Iterable[BugRecord], files: FileIndex) -> LinkTable:
    bugs = sorted(bugs, key=lambda b: b.key)
    links: list[FileBugLink] = []
    ambiguous: list[MentionIssue] = []
    unmatched: list[MentionIssue] = []
    path_to_id = {f.path: f.file_id for f in files.files}
    touched: dict[tuple[str, str], set[str]] = defaultdict(set)
    for bug in bugs:
        res = match_mentions(extract_file_mentions(bug), files, bug_id=bug.bug_id, portal=bug.portal)
        links.extend(res.links)
        ambiguous.extend(res.ambiguous)
        unmatched.extend(res.unmatched)
        touched[bug.key].update(l.file_id for l in res.links)
        for issue in res.ambiguous:
            touched[bug.key].update(path_to_id[p] for p in issue.matches)
    links.sort(key=lambda l: (l.file_id, l.portal, l.bug_id))
    return LinkTable(links, ambiguous, unmatched, _coverage(bugs, files, links, touched))


LINK_COLUMNS = ("file_id", "bug_id", "evidence", "matched_string", "portal")


def write_links_csv(links: Iterable[FileBugLink], fh: IO[str]) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(LINK_COLUMNS)
    for l in links:
        writer.writerow([l.file_id, l.bug_id, l.evidence, l.matched_string, l.portal])


def read_links_csv(fh: IO[str]) -> list[FileBugLink]:
    reader = csv.reader(fh)
    header = next(reader, None)
    if header is None:
        return []
    if tuple(header) != LINK_COLUMNS:
        raise SchemaMismatch("link table header mismatch")
    out = []
    for row in reader:
        if len(row) != len(LINK_COLUMNS):
            raise SchemaMismatch(f"link row has {len(row)} fields, expected {len(LINK_COLUMNS)}")
        if row[2] not in EVIDENCE:
            raise SchemaMismatch(f"unknown evidence kind {row[2]!r}")
        out.append(FileBugLink(*row))
    return out


def write_coverage_csv(rows: Iterable[CoverageRow], fh: IO[str]) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(COVERAGE_COLUMNS)
    for r in rows:
        writer.writerow([r.group, r.name, r.total_files, r.linked_files, r.total_bugs, r.covered_bugs])


def coverage_markdown(rows: Sequence[CoverageRow], *, seed: int | None = None,
                      taxonomy_version: str | None = None) -> str:
    lines = ["# Link coverage", ""]
    if seed is not None or taxonomy_version is not None:
        lines += [f"seed: {seed}  taxonomy_version: {taxonomy_version}", ""]
    lines += ["| group | name | total files | linked files | total bugs | covered bugs |",
              "|---|---|---:|---:|---:|---:|"]
    for r in rows:
        lines.append(f"| {r.group} | {r.name} | {r.total_files} | {r.linked_files} | "
                     f"{r.total_bugs} | {r.covered_bugs} |")
    return "\n".join(lines) + "\n"
