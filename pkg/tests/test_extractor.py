import io
import json
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from defectscope.errors import ParseFailure, SchemaMismatch, UnsupportedLanguage
from defectscope.extractor import (
    CONSTRUCT_KINDS,
    CSV_COLUMNS,
    FEATURE_COLUMNS,
    FEATURE_WIDTH,
    aggregate_stats,
    extract_features,
    features_from_text,
    parse_file,
    read_features_csv,
    scan_repository,
    write_features_csv,
    write_skip_report,
)
from defectscope.extractor.parser import ConstructObservation
from defectscope.extractor.stats import ZERO_BLOCK
from defectscope.extractor.taxonomy import KIND_BY_NAME, kind

from extraction_oracle import ALL_SNIPPETS, check_tree_text, flatten_tree, oracle_vectors

IF = KIND_BY_NAME["if-statement"]
IDENT = KIND_BY_NAME["identifier"]


def obs(k, depth, length, region=None):
    return ConstructObservation(kind=k, depth=depth, length=length, start=0, end=length, region=region)


def block_of(blocks, name):
    return blocks[KIND_BY_NAME[name].id - 1]


# ---------------------------------------------------------------- taxonomy

def test_taxonomy_is_fixed_width():
    assert len(CONSTRUCT_KINDS) == 22
    assert [k.id for k in CONSTRUCT_KINDS] == list(range(1, 23))
    assert FEATURE_WIDTH == 264
    assert FEATURE_COLUMNS[0] == "function-definition_maxCount"
    assert FEATURE_COLUMNS[-1] == "parameter_stdDevLength"
    assert CSV_COLUMNS[:7] == ("file_id", "path", "language", "scope", "scope_id", "lines", "chars")


def test_unknown_language_rejected():
    with pytest.raises(UnsupportedLanguage):
        parse_file("x", "fortran")
    with pytest.raises(KeyError):
        kind("goto-statement")


# ---------------------------------------------------------------- hand-built oracle

def test_oracle_trees_are_textually_consistent():
    assert len(ALL_SNIPPETS) == 40
    for lang in ("c", "cpp", "java", "python"):
        assert sum(s.language == lang for s in ALL_SNIPPETS) == 10
    for snippet in ALL_SNIPPETS:
        assert check_tree_text(snippet) == []


def test_oracle_covers_every_kind():
    seen = {o.kind for s in ALL_SNIPPETS for o in flatten_tree(s.tree)}
    assert seen == {k.name for k in CONSTRUCT_KINDS}


@pytest.mark.parametrize("index", range(len(ALL_SNIPPETS)))
def test_observations_match_hand_counts(index):
    snippet = ALL_SNIPPETS[index]
    expected = [(o.kind, o.depth, o.length) for o in flatten_tree(snippet.tree)]
    got = [(o.kind.name, o.depth, o.length) for o in parse_file(snippet.source, snippet.language)]
    assert got == expected


@pytest.mark.parametrize("index", range(len(ALL_SNIPPETS)))
def test_vectors_match_oracle(index):
    snippet = ALL_SNIPPETS[index]
    expected = oracle_vectors(snippet)
    vectors = features_from_text(snippet.source, snippet.language, f"repo/s{index}")
    got = {}
    for v in vectors:
        ordinal = 0 if v.scope == "file" else int(v.scope_id.split(":")[1])
        got[(v.scope, ordinal)] = list(v.values())
    assert got.keys() == expected.keys()
    for key in expected:
        assert got[key] == expected[key], key


# ---------------------------------------------------------------- parse_file examples

def test_empty_c_file_has_no_constructs():
    assert parse_file("", "c") == []


def test_nested_if_depths():
    ifs = [o for o in parse_file("int f(){ if(x){ if(y){} } }", "c") if o.kind is IF]
    fns = [o for o in parse_file("int f(){ if(x){ if(y){} } }", "c") if o.kind.name == "function-definition"]
    assert len(fns) == 1 and fns[0].depth == 0
    assert len(ifs) == 2 and ifs[1].depth > ifs[0].depth


def test_python_comment_and_identifier():
    got = parse_file("# note\nx = 1\n", "python")
    assert [o.kind.name for o in got if o.kind.name in ("comment", "identifier")] == ["comment", "identifier"]
    assert [o.length for o in got if o.kind is IDENT] == [1]


def test_string_and_comment_interiors_not_scanned():
    got = parse_file('s = "if x: f(y)"  # while z: g()\n', "python")
    assert sorted(o.kind.name for o in got) == ["comment", "identifier", "string-literal"]


def test_invalid_utf8_is_replaced():
    got = parse_file(b"x = '\xff\xfe'\n", "python")
    strings = [o for o in got if o.kind.name == "string-literal"]
    # two replacement characters plus quotes
    assert strings[0].length == 4


def test_lengths_count_characters_not_bytes():
    got = parse_file("naïve = 1\n", "python")
    assert [o.length for o in got if o.kind is IDENT] == [5]


def test_unrecoverable_source_raises_parse_failure():
    with pytest.raises(ParseFailure):
        parse_file("int f( { { ) ] ;; }}} ))) else else", "c")


def test_parse_failure_threshold_is_configurable():
    source = "int f() { return 1; }\n" * 30 + "int g( {\n"
    observations = parse_file(source, "c", max_error_fraction=0.5)
    assert observations
    with pytest.raises(ParseFailure):
        parse_file(source, "c", max_error_fraction=0.0)


def test_c_struct_is_not_a_class_but_cpp_struct_is():
    src = "struct S { int x; };\n"
    assert not any(o.kind.name == "class-definition" for o in parse_file(src, "c"))
    assert sum(o.kind.name == "class-definition" for o in parse_file(src, "cpp")) == 1


def test_java_abstract_method_is_not_a_definition():
    got = parse_file("abstract class A { abstract void f(); void g() {} }", "java")
    assert sum(o.kind.name == "function-definition" for o in got) == 1


# ---------------------------------------------------------------- aggregate_stats examples

def test_absent_kind_is_all_zero():
    blocks = aggregate_stats([obs(IDENT, 0, 3)])
    assert block_of(blocks, "if-statement") == ZERO_BLOCK
    assert all(b == ZERO_BLOCK for b in aggregate_stats([]))


def test_depth_statistics_population_std():
    blocks = aggregate_stats([obs(IF, 1, 5), obs(IF, 2, 5)])
    b = block_of(blocks, "if-statement")
    assert (b.maxDepth, b.minDepth, b.avgDepth, b.stdDevDepth) == (2.0, 1.0, 1.5, 0.5)


def test_singleton_identifier_length():
    b = block_of(aggregate_stats([obs(IDENT, 0, 7)]), "identifier")
    assert (b.maxLength, b.minLength, b.avgLength, b.stdDevLength) == (7.0, 7.0, 7.0, 0.0)


def test_file_scope_counts_are_per_region():
    observations = [obs(IF, 1, 3, "function:0"), obs(IF, 1, 3, "function:0"),
                    obs(IF, 1, 3, "function:1"), obs(IDENT, 0, 1, None)]
    b = block_of(aggregate_stats(observations, "file"), "if-statement")
    # regions function:0, function:1 and the file-level region: counts 2, 1, 0
    assert (b.maxCount, b.minCount, b.avgCount) == (2.0, 0.0, 1.0)
    assert b.stdDevCount == pytest.approx(np.std([2, 1, 0]), abs=1e-9)
    b = block_of(aggregate_stats(observations[:3], "function"), "if-statement")
    assert (b.maxCount, b.minCount, b.avgCount, b.stdDevCount) == (3.0, 3.0, 3.0, 0.0)


def test_unknown_scope_rejected():
    with pytest.raises(ValueError):
        aggregate_stats([], "module")


# ---------------------------------------------------------------- extract_features

def test_empty_file_vector(tmp_path):
    path = tmp_path / "empty.c"
    path.write_text("")
    vectors = extract_features(path, "c")
    assert len(vectors) == 1
    v = vectors[0]
    assert v.scope == "file" and v.lines == 1 and v.chars == 1
    assert not v.values().any()


def test_two_functions_give_three_vectors(tmp_path):
    path = tmp_path / "two.py"
    path.write_text("def a():\n    return 1\n\ndef b(x):\n    return x\n")
    vectors = extract_features(path, "python")
    assert [v.scope for v in vectors] == ["file", "function", "function"]
    assert all(v.values().shape == (264,) for v in vectors)


def test_identical_files_get_identical_stats_distinct_ids(tmp_path):
    for name in ("one.java", "two.java"):
        (tmp_path / name).write_text("class A { int f() { return 1; } }\n")
    a = extract_features(tmp_path / "one.java", "java")[0]
    b = extract_features(tmp_path / "two.java", "java")[0]
    assert a.stats == b.stats and a.file_id != b.file_id


def test_parse_failure_carries_path(tmp_path):
    path = tmp_path / "bad.c"
    path.write_text("int f( { { ) ] ;; }}} ))) else else")
    with pytest.raises(ParseFailure) as info:
        extract_features(path, "c", relative_path="repo/bad.c")
    assert info.value.path == "repo/bad.c"


def test_line_count_convention():
    (v,) = features_from_text("x = 1\n", "python", "r/a.py")[:1]
    assert v.lines == 2
    (v,) = features_from_text("x = 1", "python", "r/a.py")[:1]
    assert v.lines == 1


# ---------------------------------------------------------------- scan_repository

def test_scan_empty_directory(tmp_path):
    result = scan_repository(tmp_path, ["c"])
    assert result.vectors == [] and result.skipped == []


def test_scan_filters_by_extension(tmp_path):
    for i in range(3):
        (tmp_path / f"F{i}.java").write_text(f"class F{i} {{}}\n")
    (tmp_path / "notes.txt").write_text("class X {}")
    (tmp_path / "x.py").write_text("x = 1\n")
    result = scan_repository(tmp_path, ["java"])
    assert len(result.file_vectors()) == 3
    assert all(v.language == "java" for v in result.vectors)


def test_scan_records_parse_failures(tmp_path):
    (tmp_path / "bad.c").write_text("int f( { { ) ] ;; }}} ))) else else")
    result = scan_repository(tmp_path, ["c"])
    assert result.vectors == []
    assert [(s.path, s.reason) for s in result.skipped] == [(f"{tmp_path.name}/bad.c", "ParseFailure")]
    buf = io.StringIO()
    write_skip_report(result.skipped, buf)
    assert json.loads(buf.getvalue()) == {"path": f"{tmp_path.name}/bad.c", "reason": "ParseFailure"}


def _write_tree(root: Path):
    (root / "src" / "deep").mkdir(parents=True)
    (root / "src" / "a.c").write_text("int a(int x) { return x + 1; }\n")
    (root / "src" / "deep" / "b.cpp").write_text("class B { void f() { if (1) {} } };\n")
    (root / "Main.java").write_text("class Main { void m() {} }\n")
    (root / "util.py").write_text("def u():\n    pass\n")
    (root / "inc.h").write_text("int decl(int);\n")


def test_scan_paths_prefixed_with_repository_name(tmp_path):
    root = tmp_path / "repoA"
    root.mkdir()
    _write_tree(root)
    result = scan_repository(root, ["c", "cpp", "java", "python"])
    paths = [v.path for v in result.file_vectors()]
    assert paths == sorted(paths)
    assert "repoA/src/deep/b.cpp" in paths and "repoA/inc.h" in paths
    assert {v.repository for v in result.vectors} == {"repoA"}


def test_scan_parallel_matches_serial(tmp_path):
    root = tmp_path / "r"
    root.mkdir()
    _write_tree(root)
    serial = scan_repository(root, ["c", "cpp", "java", "python"], workers=1)
    parallel = scan_repository(root, ["c", "cpp", "java", "python"], workers=3)
    assert serial == parallel


def test_feature_csv_round_trip(tmp_path):
    root = tmp_path / "r"
    root.mkdir()
    _write_tree(root)
    vectors = scan_repository(root, ["c", "cpp", "java", "python"]).vectors
    buf = io.StringIO()
    write_features_csv(vectors, buf)
    buf.seek(0)
    assert read_features_csv(buf) == vectors
    bad = io.StringIO("file_id,path\n")
    with pytest.raises(SchemaMismatch):
        read_features_csv(bad)


# ---------------------------------------------------------------- properties

def _py_program(draw_tree) -> str:
    lines: list[str] = []

    def emit(node, indent):
        pad = "    " * indent
        tag, name, children = node
        if tag == "def":
            lines.append(f"{pad}def {name}(a, b=2):")
        elif tag == "if":
            lines.append(f"{pad}if {name} > 1:")
        elif tag == "while":
            lines.append(f"{pad}while not {name}:")
        elif tag == "class":
            lines.append(f"{pad}class {name.title()}:")
        else:
            lines.append(f"{pad}{name} = f({name}, 'txt')  # c")
            return
        if not children:
            lines.append(f"{pad}    return {name}" if tag == "def" else f"{pad}    pass")
        for child in children:
            emit(child, indent + 1)

    for node in draw_tree:
        emit(node, 0)
    return "\n".join(lines) + "\n"


names = st.text(alphabet="abcdefghij", min_size=1, max_size=8).map(lambda s: "v" + s)
leaf = st.tuples(st.just("stmt"), names, st.just([]))
trees = st.recursive(
    leaf,
    lambda inner: st.tuples(st.sampled_from(["def", "if", "while", "class"]), names,
                            st.lists(inner, min_size=0, max_size=3)),
    max_leaves=12,
)
programs = st.lists(trees, min_size=0, max_size=4).map(_py_program)


@settings(max_examples=60, deadline=None)
@given(programs)
def test_stat_ordering_holds(source):
    for v in features_from_text(source, "python", "r/p.py"):
        for block in v.stats:
            for family in ("Count", "Depth", "Length"):
                lo, avg, hi = (getattr(block, f"{m}{family}") for m in ("min", "avg", "max"))
                assert lo <= avg <= hi
                assert getattr(block, f"stdDev{family}") >= 0


@settings(max_examples=60, deadline=None)
@given(programs)
def test_nested_spans_are_deeper(source):
    got = parse_file(source, "python")
    for outer in got:
        for inner in got:
            if inner is not outer and outer.start <= inner.start and inner.end <= outer.end \
                    and (inner.end - inner.start) < (outer.end - outer.start):
                assert inner.depth > outer.depth
    assert all(o.length <= len(source) for o in got)


@settings(max_examples=60, deadline=None)
@given(programs)
def test_parse_is_pure(source):
    assert parse_file(source, "python") == parse_file(source, "python")


@settings(max_examples=40, deadline=None)
@given(programs, names, names)
def test_totals_invariant_under_renaming(source, p1, p2):
    a = parse_file(source, "python")
    va = features_from_text(source, "python", f"{p1}/x.py")
    vb = features_from_text(source, "python", f"{p2}/y/z.py")
    assert [v.stats for v in va] == [v.stats for v in vb]
    assert len(a) == len(parse_file(source, "python"))


@settings(max_examples=60, deadline=None)
@given(programs)
def test_function_totals_bounded_by_file_totals(source):
    observations = parse_file(source, "python")
    file_totals = {k.id: 0 for k in CONSTRUCT_KINDS}
    for o in observations:
        file_totals[o.kind.id] += 1
    for v in features_from_text(source, "python", "r/p.py"):
        if v.scope != "function":
            continue
        for k, block in zip(CONSTRUCT_KINDS, v.stats):
            # a function-scope count sample is the singleton total
            assert block.maxCount <= file_totals[k.id]
