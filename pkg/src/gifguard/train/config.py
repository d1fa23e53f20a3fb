"""Training configuration."""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import TrainError


@dataclass
class TrainConfig:
    epochs: int = 50
    k_folds: int = 5
    split_ratios: tuple[float, float, float] = (0.8, 0.1, 0.1)
    batch_size: int = 32
    initial_lr: float = 1e-4
    lr_reduce_factor: float = 0.5
    lr_patience: int = 3
    min_lr: float = 1e-6
    early_stop_patience: int = 5
    early_stop_monitor: str = "val_loss"  # or "train_loss"
    class_weight_mode: str = "inverse_frequency"  # or "none"
    seed: int = 0
    group_by_gif: bool = True
    paper_mode: bool = False

    def __post_init__(self):
        if self.epochs < 1:
            raise TrainError("epochs must be >= 1")
        if self.k_folds < 2:
            raise TrainError("k_folds must be >= 2")
        self.split_ratios = tuple(float(r) for r in self.split_ratios)
        if len(self.split_ratios) != 3 or any(r < 0 for r in self.split_ratios):
            raise TrainError("split_ratios must be three non-negative numbers")
        if abs(sum(self.split_ratios) - 1.0) > 1e-9:
            raise TrainError(f"split_ratios must sum to 1, got {sum(self.split_ratios)}")
        if not 0.0 < self.lr_reduce_factor < 1.0:
            raise TrainError("lr_reduce_factor must lie in (0, 1)")
        if self.early_stop_monitor not in ("val_loss", "train_loss"):
            raise TrainError(f"unknown monitor {self.early_stop_monitor!r}")
        if self.class_weight_mode not in ("none", "inverse_frequency"):
            raise TrainError(f"unknown class_weight_mode {self.class_weight_mode!r}")
