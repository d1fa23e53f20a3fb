"""Classification reports: per-class precision/recall/F1/support, macro and
weighted averages, and accuracy.

Display rounds to 4 decimals; machine-readable output keeps full precision.
0/0 metrics (a class never predicted, or absent from the truth) are reported
as 0 and flagged degenerate instead of erroring, which keeps pooled k-fold
reports total.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from ..errors import MetricsError
from .confusion import ConfusionMatrix, confusion


@dataclass
class ClassMetrics:
    precision: float
    recall: float
    f1: float
    support: int
    degenerate: bool = False


@dataclass
class EvalReport:
    class_names: list[str]
    per_class: list[ClassMetrics]
    macro_avg: tuple[float, float, float]
    weighted_avg: tuple[float, float, float]
    accuracy: float
    total_support: int
    confusion: ConfusionMatrix

    def to_json(self) -> dict:
        return {
            "accuracy": self.accuracy,
            "total_support": self.total_support,
            "classes": {
                name: {
                    "precision": m.precision,
                    "recall": m.recall,
                    "f1": m.f1,
                    "support": m.support,
                    "degenerate": m.degenerate,
                }
                for name, m in zip(self.class_names, self.per_class)
            },
            "macro_avg": {
                "precision": self.macro_avg[0],
                "recall": self.macro_avg[1],
                "f1": self.macro_avg[2],
            },
            "weighted_avg": {
                "precision": self.weighted_avg[0],
                "recall": self.weighted_avg[1],
                "f1": self.weighted_avg[2],
            },
            "confusion": {
                "class_names": self.confusion.class_names,
                "counts": self.confusion.counts.tolist(),
            },
        }

    def to_text(self) -> str:
        """Aligned table: accuracy header row, per-class rows, macro and
        weighted average rows."""
        rows = [["Accuracy", f"{self.accuracy:.4f}", "", "", ""]]
        rows.append(["Class", "Precision", "Recall", "F1-score", "Support"])
        for name, m in zip(self.class_names, self.per_class):
            rows.append([
                name, f"{m.precision:.4f}", f"{m.recall:.4f}", f"{m.f1:.4f}", str(m.support)
            ])
        rows.append([
            "Macro Avg",
            f"{self.macro_avg[0]:.4f}", f"{self.macro_avg[1]:.4f}", f"{self.macro_avg[2]:.4f}",
            str(self.total_support),
        ])
        rows.append([
            "Weighted Avg",
            f"{self.weighted_avg[0]:.4f}", f"{self.weighted_avg[1]:.4f}",
            f"{self.weighted_avg[2]:.4f}",
            str(self.total_support),
        ])
        widths = [max(len(r[i]) for r in rows) for i in range(5)]
        return "\n".join(
            "  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip()
            for row in rows
        )


def classification_report(matrix: ConfusionMatrix) -> EvalReport:
    """Compute the report with exact rational arithmetic, converting to
    float only at the end. This keeps the algebraic identity weighted
    recall == accuracy exact even after float conversion (both are the
    same rational trace/total)."""
    counts = matrix.counts
    total = matrix.total
    if total < 1:
        raise MetricsError("cannot report on an empty confusion matrix")
    supports = matrix.supports()
    predicted = counts.sum(axis=0)
    per_class: list[ClassMetrics] = []
    exact: list[tuple[Fraction, Fraction, Fraction]] = []
    for c in range(len(matrix.class_names)):
        tp = int(counts[c, c])
        degenerate = False
        if predicted[c] > 0:
            precision = Fraction(tp, int(predicted[c]))
        else:
            precision, degenerate = Fraction(0), True
        if supports[c] > 0:
            recall = Fraction(tp, int(supports[c]))
        else:
            recall, degenerate = Fraction(0), True
        if precision + recall > 0:
            f1 = 2 * precision * recall / (precision + recall)
        else:
            f1 = Fraction(0)
            degenerate = True
        exact.append((precision, recall, f1))
        per_class.append(ClassMetrics(
            float(precision), float(recall), float(f1), int(supports[c]), degenerate
        ))

    k = len(per_class)
    macro = tuple(float(sum(row[i] for row in exact) / k) for i in range(3))
    weighted = tuple(
        float(sum(int(supports[c]) * exact[c][i] for c in range(k)) / total)
        for i in range(3)
    )
    return EvalReport(
        class_names=list(matrix.class_names),
        per_class=per_class,
        macro_avg=macro,
        weighted_avg=weighted,
        accuracy=float(Fraction(matrix.trace, total)),
        total_support=total,
        confusion=matrix,
    )


@dataclass
class FoldPredictions:
    """Validation predictions of one fold, keyed so pooling can detect
    samples predicted more than once."""

    keys: list
    true_labels: list
    predicted_labels: list

    def __post_init__(self):
        if not (len(self.keys) == len(self.true_labels) == len(self.predicted_labels)):
            raise MetricsError("fold prediction columns differ in length")


def aggregate_fold_reports(folds: Sequence[FoldPredictions],
                           class_names: Sequence[str]) -> EvalReport:
    """Pool all validation predictions across folds into one report."""
    seen: set = set()
    y_true: list = []
    y_pred: list = []
    for fold in folds:
        for key in fold.keys:
            if key in seen:
                raise MetricsError(f"sample {key!r} predicted in more than one fold")
            seen.add(key)
        y_true.extend(fold.true_labels)
        y_pred.extend(fold.predicted_labels)
    return classification_report(confusion(y_true, y_pred, class_names))


def save_report(report: EvalReport, out_dir) -> None:
    from pathlib import Path

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "report.json").write_text(
        json.dumps(report.to_json(), indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    (out_dir / "report.txt").write_text(report.to_text() + "\n", encoding="utf-8")
    (out_dir / "confusion.csv").write_text(report.confusion.to_csv(), encoding="utf-8")
