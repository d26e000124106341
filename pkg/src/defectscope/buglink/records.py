"""Bug export ingestion (JSON Lines) and metadata normalization."""

from __future__ import annotations

import csv
import json
import logging
from collections.abc import Iterable, Mapping
from dataclasses import asdict, dataclass, field
from typing import IO

from ..errors import DataError, DuplicateBugId, MalformedRecord, SchemaMismatch

log = logging.getLogger(__name__)

PRIORITIES = ("Critical", "High", "Medium", "Low", "Unspecified")
PRIORITY_RANK = {name: rank for rank, name in enumerate(PRIORITIES)}  # lower = more severe
BUG_TYPES = ("Enhancement", "BugFix", "Other")
UNSPECIFIED = "Unspecified"
DEFAULT_PORTAL = "unknown"

DEFAULT_PRIORITY_MAP: dict[str, str] = {
    **{k: "Critical" for k in ("critical", "blocker", "p1", "highest", "urgent", "s1", "immediate")},
    **{k: "High" for k in ("high", "major", "p2", "s2")},
    **{k: "Medium" for k in ("medium", "normal", "moderate", "p3", "s3")},
    **{k: "Low" for k in ("low", "minor", "trivial", "lowest", "p4", "p5", "s4", "s5")},
    **{k: UNSPECIFIED for k in ("", "unspecified", "none", "--", "n/a", "undecided")},
}

DEFAULT_TYPE_MAP: dict[str, str] = {
    **{k: "Enhancement" for k in ("enhancement", "feature", "improvement", "new feature", "task")},
    **{k: "BugFix" for k in ("bug", "bugfix", "bug fix", "defect", "fix", "regression")},
}


@dataclass(frozen=True)
class BugRecord:
    bug_id: str
    portal: str
    summary: str
    patch_text: str | None = None
    priority: str = UNSPECIFIED
    status: str = UNSPECIFIED
    bug_type: str = "Other"
    os: str = UNSPECIFIED
    hardware: str = UNSPECIFIED
    comment_count: int = 0

    @property
    def key(self) -> tuple[str, str]:
        return (self.portal, self.bug_id)


@dataclass
class IngestResult:
    records: list[BugRecord] = field(default_factory=list)
    rejections: list[DataError] = field(default_factory=list)

    def rejection_rows(self) -> list[dict]:
        return [{"line": getattr(e, "line_number", None), "error": type(e).__name__, "message": str(e)}
                for e in self.rejections]


def normalize_priority(raw, table: Mapping[str, str] = DEFAULT_PRIORITY_MAP) -> str:
    if raw is None:
        return UNSPECIFIED
    text = str(raw).strip()
    if text in PRIORITIES:
        return text
    mapped = table.get(text.lower())
    if mapped is None:
        log.debug("unrecognized priority %r mapped to Unspecified", raw)
        return UNSPECIFIED
    return mapped


def normalize_type(raw, table: Mapping[str, str] = DEFAULT_TYPE_MAP) -> str:
    if raw is None:
        return "Other"
    text = str(raw).strip()
    if text in BUG_TYPES:
        return text
    return table.get(text.lower(), "Other")


def _text(obj: dict, key: str, line: int, default: str | None = None) -> str | None:
    value = obj.get(key)
    if value is None:
        return default
    if isinstance(value, (dict, list, bool)):
        raise MalformedRecord(line, f"field {key!r} must be a string")
    return str(value)


def parse_bug(obj: dict, line: int, *, default_portal: str = DEFAULT_PORTAL,
              priority_map: Mapping[str, str] = DEFAULT_PRIORITY_MAP) -> BugRecord:
    if not isinstance(obj, dict):
        raise MalformedRecord(line, "not a JSON object")
    bug_id = _text(obj, "bug_id", line)
    summary = _text(obj, "summary", line)
    if bug_id is None or bug_id.strip() == "":
        raise MalformedRecord(line, "missing bug_id")
    if summary is None:
        raise MalformedRecord(line, "missing summary")
    count = obj.get("comment_count", 0)
    if count is None:
        count = 0
    if isinstance(count, bool) or not isinstance(count, int) or count < 0:
        raise MalformedRecord(line, f"comment_count must be a non-negative integer, got {count!r}")
    patch = _text(obj, "patch", line)
    return BugRecord(
        bug_id=bug_id.strip(),
        portal=(_text(obj, "portal", line) or default_portal).strip() or default_portal,
        summary=summary,
        patch_text=patch if patch else None,
        priority=normalize_priority(obj.get("priority"), priority_map),
        status=_text(obj, "status", line) or UNSPECIFIED,
        bug_type=normalize_type(obj.get("type")),
        os=_text(obj, "os", line) or UNSPECIFIED,
        hardware=_text(obj, "hardware", line) or UNSPECIFIED,
        comment_count=count,
    )


def ingest_bug_reports(lines: Iterable[str], *, default_portal: str = DEFAULT_PORTAL,
                       priority_map: Mapping[str, str] | None = None) -> IngestResult:
    """Parse a JSON Lines bug export. Bad lines are collected, never fatal.

    Blank lines are ignored. Line numbers in rejections are 1-based.
    """
    table = {**DEFAULT_PRIORITY_MAP, **{k.lower(): v for k, v in (priority_map or {}).items()}}
    result = IngestResult()
    seen: set[tuple[str, str]] = set()
    for number, raw in enumerate(lines, start=1):
        if not raw.strip():
            continue
        try:
            obj = json.loads(raw)
        except json.JSONDecodeError as exc:
            result.rejections.append(MalformedRecord(number, f"invalid JSON: {exc.msg}"))
            continue
        try:
            record = parse_bug(obj, number, default_portal=default_portal, priority_map=table)
        except MalformedRecord as exc:
            result.rejections.append(exc)
            continue
        if record.key in seen:
            result.rejections.append(DuplicateBugId(number, record.portal, record.bug_id))
            continue
        seen.add(record.key)
        result.records.append(record)
    return result


BUG_COLUMNS = ("portal", "bug_id", "summary", "patch_text", "priority", "status", "bug_type",
               "os", "hardware", "comment_count")


def write_bugs_csv(records: Iterable[BugRecord], fh: IO[str]) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(BUG_COLUMNS)
    for r in records:
        row = asdict(r)
        row["patch_text"] = "" if r.patch_text is None else r.patch_text
        writer.writerow([row[c] for c in BUG_COLUMNS])


def read_bugs_csv(fh: IO[str]) -> list[BugRecord]:
    reader = csv.reader(fh)
    header = next(reader, None)
    if header is None:
        return []
    if tuple(header) != BUG_COLUMNS:
        raise SchemaMismatch("bug table header mismatch")
    out = []
    for row in reader:
        if len(row) != len(BUG_COLUMNS):
            raise SchemaMismatch(f"bug row has {len(row)} fields, expected {len(BUG_COLUMNS)}")
        values = dict(zip(BUG_COLUMNS, row))
        out.append(BugRecord(
            bug_id=values["bug_id"], portal=values["portal"], summary=values["summary"],
            patch_text=values["patch_text"] or None, priority=values["priority"],
            status=values["status"], bug_type=values["bug_type"], os=values["os"],
            hardware=values["hardware"], comment_count=int(values["comment_count"]),
        ))
    return out
