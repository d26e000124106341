"""Serialized evaluation outputs: report JSON/CSV twins and ranking tables."""

from __future__ import annotations

import csv
import io
import json
from collections.abc import Sequence
from pathlib import Path

from ..extractor import TAXONOMY_VERSION
from .compare import Comparison, RankingRow
from .cv import EvalReport
from .grid import GridEntry

RANKING_COLUMNS = ("rank", "key", "algorithm", "params", "mean_f1", "std_f1", "mean_precision",
                   "mean_recall", "best", "worst", "seed", "taxonomy_version")
FOLD_COLUMNS = ("key", "fold", "precision", "recall", "f1", "k", "seed", "taxonomy_version")


def _params(params: dict) -> str:
    return json.dumps(params, sort_keys=True, separators=(",", ":"))


def report_to_json(report: EvalReport) -> dict:
    return {
        "key": report.key,
        "config": report.config.to_dict(),
        "k": report.k,
        "seed": report.seed,
        "taxonomy_version": TAXONOMY_VERSION,
        "rows": report.n_rows,
        "folds": [{"fold": i, "precision": p, "recall": r, "f1": f}
                  for i, (p, r, f) in enumerate(zip(report.fold_precision, report.fold_recall, report.fold_f1))],
        "mean_f1": report.mean_f1,
        "std_f1": report.std_f1,
        "mean_precision": report.mean_precision,
        "mean_recall": report.mean_recall,
        "per_class": report.class_breakdown(),
    }


def reports_csv(reports: Sequence[EvalReport]) -> str:
    """One row per (key, fold), ordered by key then fold index."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(FOLD_COLUMNS)
    for report in sorted(reports, key=lambda r: r.key):
        for i, (p, r, f) in enumerate(zip(report.fold_precision, report.fold_recall, report.fold_f1)):
            writer.writerow([report.key, i, repr(p), repr(r), repr(f), report.k, report.seed, TAXONOMY_VERSION])
    return buf.getvalue()


def ranking_csv(rows: Sequence[RankingRow], seed: int) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(RANKING_COLUMNS)
    for row in rows:
        writer.writerow([row.rank, row.key, row.algorithm, _params(row.params), repr(row.mean_f1),
                         repr(row.std_f1), repr(row.mean_precision), repr(row.mean_recall),
                         int(row.best), int(row.worst), seed, TAXONOMY_VERSION])
    return buf.getvalue()


def read_ranking_csv(path: str | Path) -> list[dict]:
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


def ranking_markdown(rows: Sequence[RankingRow], seed: int, k: int, title: str = "Model ranking",
                     descriptors: dict[str, str] | None = None, skipped: Sequence[GridEntry] = ()) -> str:
    descriptors = descriptors or {}
    lines = [f"# {title}", "", f"k = {k}, seed = {seed}, taxonomy version {TAXONOMY_VERSION}", "",
             "| rank | key | model | mean F1 | std F1 | mean P | mean R | flag |",
             "|---:|---|---|---:|---:|---:|---:|---|"]
    for row in rows:
        flag = " ".join(f for f, on in (("best", row.best), ("worst", row.worst)) if on)
        model = descriptors.get(row.key) or f"{row.algorithm} {_params(row.params)}"
        lines.append(f"| {row.rank} | {row.key} | {model} | {row.mean_f1:.4f} | {row.std_f1:.4f} "
                     f"| {row.mean_precision:.4f} | {row.mean_recall:.4f} | {flag} |")
    if skipped:
        lines += ["", "Not evaluated:", ""]
        lines += [f"- {e.key} {e.descriptor}: {e.reason}" for e in skipped]
    return "\n".join(lines) + "\n"


def write_comparison(comparison: Comparison, out_dir: str | Path, stem: str = "ranking",
                     descriptors: dict[str, str] | None = None, skipped: Sequence[GridEntry] = (),
                     title: str = "Model ranking") -> dict[str, Path]:
    """Write ranking CSV/markdown plus the per-fold report JSON and CSV twin."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    reports = [comparison.reports[k] for k in sorted(comparison.reports)]
    paths = {
        "ranking_csv": out / f"{stem}.csv",
        "ranking_md": out / f"{stem}.md",
        "reports_json": out / f"{stem}_reports.json",
        "reports_csv": out / f"{stem}_folds.csv",
    }
    paths["ranking_csv"].write_text(ranking_csv(comparison.ranking, comparison.seed), encoding="utf-8")
    paths["ranking_md"].write_text(
        ranking_markdown(comparison.ranking, comparison.seed, comparison.k, title, descriptors, skipped),
        encoding="utf-8")
    doc = {"seed": comparison.seed, "k": comparison.k, "taxonomy_version": TAXONOMY_VERSION,
           "reports": [report_to_json(r) for r in reports],
           "skipped": [{"key": e.key, "descriptor": e.descriptor, "reason": e.reason} for e in skipped]}
    paths["reports_json"].write_text(json.dumps(doc, sort_keys=True, indent=2) + "\n", encoding="utf-8")
    paths["reports_csv"].write_text(reports_csv(reports), encoding="utf-8")
    return paths
