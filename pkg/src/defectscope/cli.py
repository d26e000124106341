"""Command-line front end for the whole pipeline.

Exit codes: 0 success, 1 usage error, 2 data error. Every command prints a
JSON summary on stdout that echoes the seed and taxonomy version.
"""

from __future__ import annotations

import argparse
import io
import json
import os
import shutil
import sys
from collections import Counter
from pathlib import Path

from . import SCHEMA_VERSION, __version__
from .buglink import FileIndex, build_link_table, coverage_markdown, ingest_bug_reports, write_coverage_csv
from .errors import DataError, UnsupportedLanguage
from .evaluator import (
    TwoPhaseModel,
    compare_models,
    load_grid,
    phase1_dataset,
    phase2_dataset,
    two_phase_predict,
    write_comparison,
)
from .extractor import LANGUAGES, TAXONOMY_VERSION, extract_features, normalize_language, scan_repository
from .extractor.features import write_skip_report
from .knowledgebase import (
    BUGS,
    CHARACTERISTICS,
    FEATURES,
    MAPPING,
    Band,
    KnowledgeStore,
    build_refined_dataset,
    load_refined,
    refine_vector,
)
from .knowledgebase.store import COVERAGE_CSV, COVERAGE_MD, LINK_REPORT, REJECTIONS, SKIP_REPORT, atomic_write
from .learners import ModelConfig, train

WORKERS_ENV = "DEFECTSCOPE_WORKERS"
EVALUATIONS = "evaluations"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _emit(payload: dict, seed: int | None) -> None:
    payload = {**payload, "seed": seed, "taxonomy_version": TAXONOMY_VERSION}
    print(json.dumps(payload, sort_keys=True))


def _warn(message: str) -> None:
    print(message, file=sys.stderr)


def _workers(args) -> int | None:
    if getattr(args, "workers", None):
        return args.workers
    raw = os.environ.get(WORKERS_ENV)
    return int(raw) if raw and raw.isdigit() else None


def _store(path: str, create: bool = False) -> KnowledgeStore:
    store = KnowledgeStore(path)
    if create:
        return store.init()
    if not store.root.is_dir():
        raise DataError(f"store {path} does not exist")
    store.manifest()
    return store


def _write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    atomic_write(path, lambda fh: fh.write(text))


# ---------------------------------------------------------------- commands
def cmd_extract(args) -> int:
    languages = {normalize_language(lang) for lang in args.lang}
    store = _store(args.store, create=True)
    vectors, skipped = [], []
    for repo in args.repo:
        root = Path(repo)
        if not root.is_dir():
            raise DataError(f"repository {repo} is not a directory")
        result = scan_repository(root, languages, workers=_workers(args))
        vectors += result.vectors
        skipped += result.skipped
    store.persist(FEATURES, vectors, cascade=args.cascade)
    atomic_write(store.root / SKIP_REPORT, lambda fh: write_skip_report(skipped, fh))
    for record in skipped:
        _warn(f"skipped {record.path}: {record.reason}")
    files = [v for v in vectors if v.scope == "file"]
    _emit({"command": "extract", "files": len(files), "vectors": len(vectors), "skipped": len(skipped),
           "languages": dict(sorted(Counter(v.language for v in files).items()))}, args.seed)
    return 0


def cmd_ingest(args) -> int:
    store = _store(args.store, create=True)
    with open(args.input, encoding="utf-8") as fh:
        result = ingest_bug_reports(fh, default_portal=args.portal)
    store.persist(BUGS, result.records, cascade=args.cascade)
    rows = result.rejection_rows()
    text = "".join(json.dumps(r, sort_keys=True) + "\n" for r in rows)
    _write_text(store.root / REJECTIONS, text)
    for r in rows:
        _warn(f"rejected line {r['line']}: {r['message']}")
    _emit({"command": "ingest-bugs", "bugs": len(result.records), "rejected": len(rows)}, args.seed)
    return 0


def cmd_link(args) -> int:
    store = _store(args.store)
    bugs = store.load(BUGS)
    index = FileIndex.from_vectors(store.load(FEATURES))
    table = build_link_table(bugs, index)
    store.persist(MAPPING, table.links, cascade=True)
    _write_text(store.root / LINK_REPORT, "".join(i.to_json() + "\n" for i in table.issues()))
    _write_coverage(store.root, table.coverage, args.seed)
    for issue in table.ambiguous:
        _warn(f"ambiguous mention {issue.candidate!r} in {issue.portal}/{issue.bug_id}")
    _emit({"command": "link", "links": len(table.links), "ambiguous": len(table.ambiguous),
           "unmatched": len(table.unmatched)}, args.seed)
    return 0


def _write_coverage(directory: Path, rows, seed: int) -> None:
    buf = io.StringIO()
    write_coverage_csv(rows, buf)
    _write_text(directory / COVERAGE_CSV, buf.getvalue())
    _write_text(directory / COVERAGE_MD, coverage_markdown(rows, seed=seed, taxonomy_version=TAXONOMY_VERSION))


def cmd_refine(args) -> int:
    store = _store(args.store)
    band = Band.parse(args.band) if args.band else None
    dataset = build_refined_dataset(store, band, args.cap, args.seed)
    sel = dataset.selection
    for empty in sel.empty_bands:
        _warn(f"no {empty.language} file inside band {empty.band.low:g}:{empty.band.high:g}")
    _emit({"command": "refine", "rows": len(dataset.rows), "cap": sel.cap, "band": sel.band.to_json(),
           "selected": sel.selected,
           "labels": dict(sorted(Counter(r.labels.phase1 for r in dataset.rows).items()))}, args.seed)
    return 0


def _resolve_config(args, phase: int) -> tuple[str, ModelConfig]:
    grid = load_grid(args.grid or f"phase{phase}", seed=args.seed)
    try:
        entry = grid.get(args.model)
    except KeyError:
        raise UsageError(f"unknown model key {args.model!r} in the phase-{grid.phase} grid") from None
    if entry.config is None:
        raise UsageError(f"model key {args.model!r} is not implemented: {entry.reason}")
    config = entry.config
    if args.params:
        data = {**config.to_dict(), **json.loads(args.params)}
        config = ModelConfig.from_dict(data)
    return entry.key, config


def _characteristics(value: str) -> list[str]:
    return list(CHARACTERISTICS) if value == "all" else [value]


def cmd_train(args) -> int:
    store = _store(args.store)
    rows, scaling, _ = load_refined(store)
    key, config = _resolve_config(args, args.phase)
    out = Path(args.out)
    bundle = TwoPhaseModel.load(out) if out.exists() else TwoPhaseModel(None, {}, scaling, args.seed)
    if bundle.scaling is not None and bundle.scaling != scaling:
        raise DataError(f"{out} was trained against a different refinement; use a new --out")
    bundle.scaling, bundle.seed = scaling, args.seed
    trained = []
    if args.phase == 1:
        bundle.phase1 = train(config, *phase1_dataset(rows))
        trained.append("phase1")
    else:
        for name in _characteristics(args.characteristic):
            X, y = phase2_dataset(rows, name)
            if not y:
                _warn(f"no labeled rows for characteristic {name}; not trained")
                continue
            bundle.phase2[name] = train(config, X, y)
            trained.append(name)
    out.parent.mkdir(parents=True, exist_ok=True)
    bundle.save(out)
    _emit({"command": "train", "model": key, "algorithm": config.algorithm, "trained": trained,
           "out": str(out)}, args.seed)
    return 0


def _drop_small_classes(X, y, k: int, label: str):
    counts = Counter(y)
    small = sorted(c for c, n in counts.items() if n < k)
    if small:
        _warn(f"{label}: dropping classes with fewer than {k} rows: {', '.join(small)}")
        keep = [i for i, c in enumerate(y) if c not in small]
        X, y = X[keep], [y[i] for i in keep]
    return X, y


def cmd_evaluate(args) -> int:
    store = _store(args.store)
    rows, _, _ = load_refined(store)
    grid = load_grid(args.models, seed=args.seed)
    configs = grid.implemented()
    descriptors = {e.key: e.descriptor for e in grid.entries}
    out = Path(args.out)
    targets = [("phase1", *phase1_dataset(rows))] if grid.phase == 1 else [
        (name, *phase2_dataset(rows, name)) for name in _characteristics(args.characteristic)]
    produced = {}
    for stem, X, y in targets:
        if grid.phase == 2:
            X, y = _drop_small_classes(X, y, args.k, stem)
            if len(set(y)) < 2:
                _warn(f"{stem}: fewer than two classes with at least {args.k} rows; not evaluated")
                continue
        comparison = compare_models(configs, X, y, args.k, args.seed, workers=_workers(args))
        title = f"Model ranking: {stem}"
        paths = write_comparison(comparison, out, f"ranking_{stem}", descriptors, grid.skipped(), title)
        mirror = store.root / EVALUATIONS
        mirror.mkdir(exist_ok=True)
        for path in paths.values():
            shutil.copyfile(path, mirror / path.name)
        best = [r.key for r in comparison.ranking if r.best]
        produced[stem] = {"rows": len(comparison.ranking), "best": best,
                          "ranking_csv": str(paths["ranking_csv"])}
    if not produced:
        raise DataError("nothing could be evaluated")
    _emit({"command": "evaluate", "phase": grid.phase, "k": args.k, "results": produced,
           "skipped_keys": [e.key for e in grid.skipped()]}, args.seed)
    return 0


def cmd_predict(args) -> int:
    bundle = TwoPhaseModel.load(args.model)
    if bundle.scaling is None:
        raise DataError(f"{args.model} carries no scaling record")
    language = normalize_language(args.lang)
    vectors = extract_features(Path(args.file), language, relative_path=Path(args.file).name)
    file_vector = next(v for v in vectors if v.scope == "file")
    refined = refine_vector(file_vector, bundle.scaling)
    chars = None if args.characteristic is None else _characteristics(args.characteristic)
    labels = two_phase_predict(bundle, refined, chars)
    print(json.dumps({**labels.to_dict(), "seed": bundle.seed, "taxonomy_version": TAXONOMY_VERSION},
                     sort_keys=True))
    return 0


def cmd_report(args) -> int:
    store = _store(args.store)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    table = build_link_table(store.load(BUGS), FileIndex.from_vectors(store.load(FEATURES)))
    _write_coverage(out, table.coverage, args.seed)
    copied = []
    mirror = store.root / EVALUATIONS
    if mirror.is_dir():
        for path in sorted(mirror.iterdir()):
            if path.name.startswith("ranking_") and path.suffix in (".csv", ".md"):
                shutil.copyfile(path, out / path.name)
                copied.append(path.name)
    if not copied:
        _warn("no evaluation results in the store; run evaluate first for ranking tables")
    _emit({"command": "report", "coverage": [COVERAGE_CSV, COVERAGE_MD], "rankings": copied}, args.seed)
    return 0


def cmd_synth(args) -> int:
    from .synthetic import generate_corpus

    corpus = generate_corpus(args.out, args.per_language, args.seed, noise=args.noise)
    _emit({"command": "synth", "files": len(corpus.files), "bugs": corpus.bug_count,
           "repositories": [str(p) for p in corpus.repositories], "bugs_file": str(corpus.bugs_path)},
          args.seed)
    return 0


# ---------------------------------------------------------------- parser
def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="defectscope", description="Source-style defect prediction pipeline.")
    parser.add_argument("--version", action="version",
                        version=f"defectscope {__version__} (taxonomy {TAXONOMY_VERSION}, schema {SCHEMA_VERSION})")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)

    def command(name: str, func, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(func=func)
        p.add_argument("--seed", type=int, default=42, help="random seed (default 42)")
        return p

    p = command("extract", cmd_extract, "scan repositories into the feature table")
    p.add_argument("--repo", action="append", required=True, help="repository root; repeatable")
    p.add_argument("--lang", nargs="+", default=list(LANGUAGES), help="languages to scan")
    p.add_argument("--store", required=True)
    p.add_argument("--workers", type=int, help=f"parallel parsers (or ${WORKERS_ENV})")
    p.add_argument("--cascade", action="store_true", help="clear tables that depend on the old features")

    p = command("ingest-bugs", cmd_ingest, "load a JSON Lines bug export")
    p.add_argument("--input", required=True)
    p.add_argument("--store", required=True)
    p.add_argument("--portal", default="unknown", help="portal name for records that omit one")
    p.add_argument("--cascade", action="store_true")

    p = command("link", cmd_link, "map bug reports to source files")
    p.add_argument("--store", required=True)

    p = command("refine", cmd_refine, "build the refined training table")
    p.add_argument("--store", required=True)
    p.add_argument("--band", help="line-count band LOW:HIGH (default: 25th to 75th percentile)")
    p.add_argument("--cap", type=int, help="files per language (default: smallest in-band count)")

    p = command("train", cmd_train, "train a phase-1 or phase-2 model into a bundle")
    p.add_argument("--store", required=True)
    p.add_argument("--model", required=True, help="grid key")
    p.add_argument("--phase", type=int, choices=(1, 2), required=True)
    p.add_argument("--characteristic", choices=CHARACTERISTICS + ("all",), default="all")
    p.add_argument("--grid", help="grid file (default: the shipped grid for --phase)")
    p.add_argument("--params", help="JSON object overriding config fields")
    p.add_argument("--out", required=True, help="model bundle; updated in place when present")

    p = command("evaluate", cmd_evaluate, "cross-validate every grid key and rank them")
    p.add_argument("--store", required=True)
    p.add_argument("--models", default="phase1", help="grid file, or phase1 / phase2 for the shipped grids")
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--characteristic", choices=CHARACTERISTICS + ("all",), default="all")
    p.add_argument("--out", required=True)
    p.add_argument("--workers", type=int)

    p = command("predict", cmd_predict, "label one source file with a trained bundle")
    p.add_argument("--model", required=True)
    p.add_argument("--file", required=True)
    p.add_argument("--lang", required=True)
    p.add_argument("--characteristic", choices=CHARACTERISTICS + ("all",))

    p = command("report", cmd_report, "write coverage and ranking tables")
    p.add_argument("--store", required=True)
    p.add_argument("--out", required=True)

    p = command("synth", cmd_synth, "generate the planted-signal demo corpus")
    p.add_argument("--out", required=True)
    p.add_argument("--per-language", type=int, default=50)
    p.add_argument("--noise", type=float, default=0.05, help="fraction of files with flipped bug linkage")
    return parser


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("defectscope: error: a command is required")
        if getattr(args, "k", 2) < 2:
            raise UsageError("--k must be at least 2")
        return args.func(args)
    except UsageError as exc:
        if "a command is required" in str(exc):
            parser.print_usage(sys.stderr)
        _warn(str(exc))
        return 1
    except SystemExit as exc:
        return int(exc.code or 0)
    except UnsupportedLanguage as exc:
        _warn(f"error: {exc}")
        return 1
    except DataError as exc:
        _warn(f"error: {exc}")
        return 2
    except (OSError, ValueError) as exc:
        _warn(f"error: {exc}")
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
