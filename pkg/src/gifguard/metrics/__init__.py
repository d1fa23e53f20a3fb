from .confusion import ConfusionMatrix, confusion
from .curves import export_curves
from .report import (
    ClassMetrics,
    EvalReport,
    FoldPredictions,
    aggregate_fold_reports,
    classification_report,
    save_report,
)

__all__ = [
    "ClassMetrics",
    "ConfusionMatrix",
    "EvalReport",
    "FoldPredictions",
    "aggregate_fold_reports",
    "classification_report",
    "confusion",
    "export_curves",
    "save_report",
]
