from .compare import Comparison, RankingRow, compare_models, rank_reports
from .cv import EvalReport, cross_validate, stratified_kfold_split
from .grid import Grid, GridEntry, load_grid, parse_grid
from .metrics import ConfusionCounts, MacroScores, confusion_by_class, f1, macro_scores, mean_std, precision, recall
from .reports import (
    RANKING_COLUMNS,
    ranking_csv,
    ranking_markdown,
    read_ranking_csv,
    report_to_json,
    reports_csv,
    write_comparison,
)
from .twophase import TwoPhaseModel, phase1_dataset, phase2_dataset, train_two_phase, two_phase_predict

__all__ = [
    "RANKING_COLUMNS", "Comparison", "ConfusionCounts", "EvalReport", "Grid", "GridEntry", "MacroScores",
    "RankingRow", "TwoPhaseModel", "compare_models", "confusion_by_class", "cross_validate", "f1",
    "load_grid", "macro_scores", "mean_std", "parse_grid", "phase1_dataset", "phase2_dataset", "precision",
    "rank_reports", "ranking_csv", "ranking_markdown", "read_ranking_csv", "recall", "report_to_json",
    "reports_csv", "stratified_kfold_split", "train_two_phase", "two_phase_predict", "write_comparison",
]
