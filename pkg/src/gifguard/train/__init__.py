from .callbacks import CallbackDecision, CallbackState, EpochRecord, TrainHistory
from .class_weights import compute_class_weights, sample_weights
from .config import TrainConfig
from .loop import (
    ArrayDataset,
    FoldResult,
    KFoldResult,
    extract_pooled_features,
    kfold_train,
    predict_classes,
    train_holdout,
    write_run_config,
)
from .splitting import SplitAssignment, SplitItem, kfold_assignments, split_dataset

__all__ = [
    "ArrayDataset",
    "CallbackDecision",
    "CallbackState",
    "EpochRecord",
    "FoldResult",
    "KFoldResult",
    "SplitAssignment",
    "SplitItem",
    "TrainConfig",
    "TrainHistory",
    "compute_class_weights",
    "extract_pooled_features",
    "kfold_assignments",
    "kfold_train",
    "predict_classes",
    "sample_weights",
    "split_dataset",
    "train_holdout",
    "write_run_config",
]
