from .linking import (
    COVERAGE_COLUMNS,
    EVIDENCE,
    LINK_COLUMNS,
    CoverageRow,
    FileBugLink,
    FileIndex,
    IndexedFile,
    LinkTable,
    MatchResult,
    Mention,
    MentionIssue,
    build_link_table,
    coverage_markdown,
    extract_file_mentions,
    match_mentions,
    read_links_csv,
    write_coverage_csv,
    write_links_csv,
)
from .records import (
    BUG_COLUMNS,
    BUG_TYPES,
    DEFAULT_PRIORITY_MAP,
    PRIORITIES,
    PRIORITY_RANK,
    BugRecord,
    IngestResult,
    ingest_bug_reports,
    normalize_priority,
    normalize_type,
    read_bugs_csv,
    write_bugs_csv,
)

__all__ = [
    "BUG_COLUMNS", "BUG_TYPES", "COVERAGE_COLUMNS", "DEFAULT_PRIORITY_MAP", "EVIDENCE",
    "LINK_COLUMNS", "PRIORITIES", "PRIORITY_RANK", "BugRecord", "CoverageRow", "FileBugLink",
    "FileIndex", "IndexedFile", "IngestResult", "LinkTable", "MatchResult", "Mention", "MentionIssue",
    "build_link_table", "coverage_markdown", "extract_file_mentions", "ingest_bug_reports",
    "match_mentions", "normalize_priority", "normalize_type", "read_bugs_csv", "read_links_csv",
    "write_bugs_csv", "write_coverage_csv", "write_links_csv",
]
