"""Precision, recall and F1 with a zero-denominator convention of 0."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass


@dataclass(frozen=True)
class ConfusionCounts:
    true_positive: int = 0
    false_positive: int = 0
    false_negative: int = 0
    true_negative: int = 0

    def __add__(self, other: "ConfusionCounts") -> "ConfusionCounts":
        return ConfusionCounts(self.true_positive + other.true_positive,
                               self.false_positive + other.false_positive,
                               self.false_negative + other.false_negative,
                               self.true_negative + other.true_negative)

    @property
    def total(self) -> int:
        return self.true_positive + self.false_positive + self.false_negative + self.true_negative


def precision(cc: ConfusionCounts) -> float:
    denom = cc.true_positive + cc.false_positive
    return cc.true_positive / denom if denom else 0.0


def recall(cc: ConfusionCounts) -> float:
    denom = cc.true_positive + cc.false_negative
    return cc.true_positive / denom if denom else 0.0


def f1(cc_or_p: ConfusionCounts | float, r: float | None = None) -> float:
    """F1 from confusion counts, or from a (precision, recall) pair."""
    if isinstance(cc_or_p, ConfusionCounts):
        p, r = precision(cc_or_p), recall(cc_or_p)
    else:
        if r is None:
            raise TypeError("f1(p, r) needs both precision and recall")
        p = float(cc_or_p)
    denom = p + r
    return 2.0 * p * r / denom if denom else 0.0


def confusion_by_class(y_true: Sequence[str], y_pred: Sequence[str],
                       labels: Sequence[str]) -> dict[str, ConfusionCounts]:
    """One-vs-rest confusion counts for each label."""
    if len(y_true) != len(y_pred):
        raise ValueError("y_true and y_pred lengths differ")
    out = {}
    for label in labels:
        tp = fp = fn = tn = 0
        for t, p in zip(y_true, y_pred):
            if t == label:
                if p == label:
                    tp += 1
                else:
                    fn += 1
            elif p == label:
                fp += 1
            else:
                tn += 1
        out[label] = ConfusionCounts(tp, fp, fn, tn)
    return out


@dataclass(frozen=True)
class MacroScores:
    precision: float
    recall: float
    f1: float
    per_class: dict[str, ConfusionCounts]


def macro_scores(y_true: Sequence[str], y_pred: Sequence[str]) -> MacroScores:
    """Unweighted means of per-class P, R and F1 over labels seen in either sequence.

    The macro F1 is the mean of per-class F1 values, not the F1 of the
    macro precision and recall.
    """
    labels = sorted(set(y_true) | set(y_pred))
    per_class = confusion_by_class(y_true, y_pred, labels)
    if not labels:
        return MacroScores(0.0, 0.0, 0.0, {})
    n = len(labels)
    return MacroScores(
        sum(precision(c) for c in per_class.values()) / n,
        sum(recall(c) for c in per_class.values()) / n,
        sum(f1(c) for c in per_class.values()) / n,
        per_class,
    )


def mean_std(values: Sequence[float]) -> tuple[float, float]:
    """Mean and population standard deviation."""
    n = len(values)
    if n == 0:
        return 0.0, 0.0
    mean = sum(values) / n
    var = sum((v - mean) ** 2 for v in values) / n
    return mean, var ** 0.5
