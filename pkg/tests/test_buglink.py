import io
import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from defectscope.buglink import (
    BugRecord,
    FileIndex,
    IndexedFile,
    Mention,
    build_link_table,
    coverage_markdown,
    extract_file_mentions,
    ingest_bug_reports,
    match_mentions,
    normalize_priority,
    read_links_csv,
    write_coverage_csv,
    write_links_csv,
)
from defectscope.buglink.records import read_bugs_csv, write_bugs_csv
from defectscope.errors import DuplicateBugId, MalformedRecord

import link_fixture as fx


def _lines(*objs):
    return [json.dumps(o) for o in objs]


# ---------------------------------------------------------------- ingestion
def test_empty_stream():
    result = ingest_bug_reports([])
    assert result.records == [] and result.rejections == []


def test_missing_optionals_take_defaults():
    [rec] = ingest_bug_reports(_lines({"bug_id": "7", "summary": "x"})).records
    assert (rec.priority, rec.bug_type, rec.comment_count, rec.portal) == ("Unspecified", "Other", 0, "unknown")
    assert rec.patch_text is None


def test_duplicate_is_rejected_second_time():
    result = ingest_bug_reports(_lines({"bug_id": "1", "portal": "p", "summary": "a"},
                                       {"bug_id": "1", "portal": "p", "summary": "b"}))
    assert [r.summary for r in result.records] == ["a"]
    [err] = result.rejections
    assert isinstance(err, DuplicateBugId) and err.line_number == 2


def test_same_id_on_different_portals_is_fine():
    result = ingest_bug_reports(_lines({"bug_id": "1", "portal": "p", "summary": "a"},
                                       {"bug_id": "1", "portal": "q", "summary": "b"}))
    assert len(result.records) == 2 and not result.rejections


def test_malformed_lines_report_line_numbers():
    lines = ["{not json", "", json.dumps({"summary": "no id"}), json.dumps({"bug_id": "2"}),
             json.dumps({"bug_id": "3", "summary": "s", "comment_count": -1}),
             json.dumps({"bug_id": "4", "summary": "s", "comment_count": "many"}),
             json.dumps([1, 2]), json.dumps({"bug_id": "5", "summary": "ok"})]
    result = ingest_bug_reports(lines)
    assert [r.bug_id for r in result.records] == ["5"]
    assert [e.line_number for e in result.rejections] == [1, 3, 4, 5, 6, 7]
    assert all(isinstance(e, MalformedRecord) for e in result.rejections)
    rows = result.rejection_rows()
    assert rows[0]["line"] == 1 and rows[0]["error"] == "MalformedRecord"


@pytest.mark.parametrize("raw,expected", [
    ("P1", "Critical"), ("blocker", "Critical"), ("major", "High"), ("normal", "Medium"),
    ("trivial", "Low"), ("Low", "Low"), (None, "Unspecified"), ("--", "Unspecified"),
    ("whatever", "Unspecified"),
])
def test_priority_synonyms(raw, expected):
    assert normalize_priority(raw) == expected


def test_custom_priority_map():
    [rec] = ingest_bug_reports(_lines({"bug_id": "1", "summary": "s", "priority": "Sev-A"}),
                               priority_map={"sev-a": "Critical"}).records
    assert rec.priority == "Critical"


def test_type_mapping():
    recs = ingest_bug_reports(_lines({"bug_id": "1", "summary": "s", "type": "defect"},
                                     {"bug_id": "2", "summary": "s", "type": "feature"},
                                     {"bug_id": "3", "summary": "s", "type": "question"})).records
    assert [r.bug_type for r in recs] == ["BugFix", "Enhancement", "Other"]


def test_bug_csv_round_trip():
    buf = io.StringIO()
    write_bugs_csv(fx.BUGS, buf)
    buf.seek(0)
    assert tuple(read_bugs_csv(buf)) == fx.BUGS


# ---------------------------------------------------------------- mentions
def test_plus_header_gives_patch_path():
    bug = BugRecord("1", "p", "s", patch_text="+++ b/src/util/Buffer.java\n")
    assert extract_file_mentions(bug) == [Mention("src/util/Buffer.java", "patch-path", "src/util/Buffer.java")]


def test_summary_mention_without_patch():
    bug = BugRecord("1", "p", "crash in parser.c on startup")
    assert extract_file_mentions(bug) == [Mention("parser.c", "summary-mention", "parser.c")]


def test_no_mentions():
    assert extract_file_mentions(BugRecord("1", "p", "it broke")) == []


def test_summary_ignored_when_patch_present():
    bug = BugRecord("1", "p", "see other.c", patch_text="--- a/x/y.py\n+++ b/x/y.py\n")
    assert [m.candidate for m in extract_file_mentions(bug)] == ["x/y.py"]


def test_header_variants():
    patch = ("Index: lib/a.c\n"
             "--- /dev/null\n+++ b/lib/new.h\t2020-01-01\n"
             "diff --git a/old/name.cc b/new/name.cc\n"
             "+ mentions body.java but headers win\n")
    got = [m.candidate for m in extract_file_mentions(BugRecord("1", "p", "s", patch_text=patch))]
    assert got == ["lib/a.c", "lib/new.h", "old/name.cc", "new/name.cc"]


def test_headerless_patch_is_scanned():
    bug = BugRecord("1", "p", "s", patch_text="changed ./src/io.cpp and util.hpp, not notes.txt")
    mentions = extract_file_mentions(bug)
    assert [(m.candidate, m.evidence) for m in mentions] == [("src/io.cpp", "patch-path"),
                                                             ("util.hpp", "patch-basename")]
    assert mentions[0].matched_string == "./src/io.cpp"


def test_match_unique_suffix():
    index = FileIndex([IndexedFile("a", "repoA/src/util/Buffer.java")])
    res = match_mentions([Mention("src/util/Buffer.java", "patch-path", "src/util/Buffer.java")], index)
    assert [l.file_id for l in res.links] == ["a"]


def test_match_ambiguous_basename():
    index = FileIndex([IndexedFile("a", "r/x/Buffer.java"), IndexedFile("b", "r/y/Buffer.java")])
    res = match_mentions([Mention("Buffer.java", "summary-mention", "Buffer.java")], index)
    assert res.links == [] and len(res.ambiguous) == 1 and set(res.ambiguous[0].matches) == {"r/x/Buffer.java",
                                                                                              "r/y/Buffer.java"}


def test_match_unmatched():
    res = match_mentions([Mention("gone.c", "summary-mention", "gone.c")], FileIndex([]))
    assert res.links == [] and [u.candidate for u in res.unmatched] == ["gone.c"]


def test_suffix_respects_component_boundary():
    index = FileIndex([IndexedFile("a", "r/mysrc/a.c"), IndexedFile("b", "r/src/a.c")])
    res = match_mentions([Mention("src/a.c", "patch-path", "src/a.c")], index)
    assert [l.file_id for l in res.links] == ["b"]


# ---------------------------------------------------------------- link table
def test_fixture_link_set_exact():
    table = build_link_table(fx.BUGS, fx.INDEX)
    assert table.links == list(fx.EXPECTED_LINKS)
    assert [(i.bug_id, i.candidate, i.matches) for i in table.ambiguous] == list(fx.EXPECTED_AMBIGUOUS)
    assert [(i.bug_id, i.candidate) for i in table.unmatched] == list(fx.EXPECTED_UNMATCHED)


def test_fixture_coverage():
    table = build_link_table(fx.BUGS, fx.INDEX)
    rows = {(r.group, r.name): r for r in table.coverage}
    overall = rows[("all", "all")]
    assert (overall.total_files, overall.linked_files, overall.total_bugs, overall.covered_bugs) == (5, 4, 4, 3)
    alpha = rows[("repository", "alpha")]
    # bug 2 resolved (ambiguously) into alpha, so it counts as a bug without being covered
    assert (alpha.total_files, alpha.linked_files, alpha.total_bugs, alpha.covered_bugs) == (3, 2, 3, 2)
    py = rows[("language", "python")]
    assert (py.total_files, py.linked_files, py.total_bugs, py.covered_bugs) == (2, 1, 2, 1)


def test_zero_bugs():
    table = build_link_table([], fx.INDEX)
    assert table.links == [] and table.coverage[0].linked_files == 0


def test_one_patch_two_files():
    table = build_link_table([fx.BUGS[2]], fx.INDEX)
    assert {l.file_id for l in table.links} == {"f2", "f4"}
    assert table.coverage[0].covered_bugs == 1


def test_two_bugs_same_file():
    bugs = [BugRecord("a", "p", "fix in socket.c"), BugRecord("b", "p", "again socket.c")]
    table = build_link_table(bugs, fx.INDEX)
    assert len(table.links) == 2 and table.coverage[0].linked_files == 1


def test_link_csv_round_trip_and_markdown():
    table = build_link_table(fx.BUGS, fx.INDEX)
    buf = io.StringIO()
    write_links_csv(table.links, buf)
    assert buf.getvalue().splitlines()[0] == "file_id,bug_id,evidence,matched_string,portal"
    buf.seek(0)
    assert read_links_csv(buf) == table.links
    out = io.StringIO()
    write_coverage_csv(table.coverage, out)
    assert out.getvalue().count("\n") == len(table.coverage) + 1
    md = coverage_markdown(table.coverage, seed=42, taxonomy_version="1")
    assert "seed: 42" in md and "| all | all | 5 | 4 | 4 | 3 |" in md


# ---------------------------------------------------------------- properties
_path_part = st.sampled_from(["src", "lib", "core", "net", "util"])
_base = st.sampled_from(["a", "b", "main", "io"])
_ext = st.sampled_from(["c", "h", "cpp", "java", "py"])
_paths = st.builds(lambda parts, base, ext: "/".join(parts + [f"{base}.{ext}"]),
                   st.lists(_path_part, max_size=2), _base, _ext)


@st.composite
def _world(draw):
    paths = draw(st.lists(_paths, min_size=1, max_size=8, unique=True))
    files = [IndexedFile(f"id{i}", f"repo/{p}") for i, p in enumerate(paths)]
    bugs = []
    for j in range(draw(st.integers(0, 6))):
        named = draw(st.lists(st.sampled_from(paths + ["zz/none.c"]), max_size=3))
        if draw(st.booleans()):
            patch = "".join(f"+++ b/{n}\n" for n in named)
            bugs.append(BugRecord(str(j), "p", "s", patch_text=patch or None))
        else:
            bugs.append(BugRecord(str(j), "p", " and ".join(n.rsplit("/", 1)[-1] for n in named)))
    return files, bugs


@settings(max_examples=150, deadline=None)
@given(_world())
def test_link_invariants(world):
    files, bugs = world
    index = FileIndex(files)
    table = build_link_table(bugs, index)
    by_key = {(b.portal, b.bug_id): b for b in bugs}
    ids = {f.file_id for f in files}
    pairs = [(l.file_id, l.bug_id) for l in table.links]
    assert len(pairs) == len(set(pairs))
    for link in table.links:
        bug = by_key[(link.portal, link.bug_id)]
        assert link.file_id in ids
        assert link.matched_string in (bug.patch_text or "") + bug.summary
    overall = table.coverage[0]
    assert overall.linked_files <= overall.total_files
    assert overall.covered_bugs <= overall.total_bugs
    assert build_link_table(list(reversed(bugs)), FileIndex(reversed(files))) == table
