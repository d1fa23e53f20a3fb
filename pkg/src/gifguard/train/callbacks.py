"""Callback state machine: checkpoint-on-improvement, learning-rate
reduction on plateau, and early stopping.

The machine is pure (epoch index + monitored loss in, decision out) so the
exact stopping/reduction epochs can be verified on scripted loss sequences
independently of any real training.

Semantics, shared by all three callbacks through one notion of
"improvement" (monitored value strictly below the best seen so far):

- improvement  -> write a checkpoint, reset both patience counters
- no improvement for ``lr_patience`` consecutive epochs -> multiply the
  learning rate by ``reduce_factor`` (floored at ``min_lr``) and restart
  the LR counter
- no improvement for ``early_stop_patience`` consecutive epochs -> stop
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from ..errors import DivergenceError, TrainError


@dataclass(frozen=True)
class CallbackDecision:
    epoch: int
    improved: bool
    checkpoint: bool
    learning_rate: float
    reduced_lr: bool
    stop: bool


class CallbackState:
    def __init__(self, initial_lr: float, lr_reduce_factor: float = 0.5,
                 lr_patience: int = 3, min_lr: float = 1e-6,
                 early_stop_patience: int = 5):
        self.lr = float(initial_lr)
        self.factor = float(lr_reduce_factor)
        self.lr_patience = int(lr_patience)
        self.min_lr = float(min_lr)
        self.stop_patience = int(early_stop_patience)
        self.best: Optional[float] = None
        self.best_epoch: Optional[int] = None
        self._lr_wait = 0
        self._stop_wait = 0

    def update(self, epoch: int, monitored: float) -> CallbackDecision:
        """Feed one epoch's monitored loss; epochs are 1-based."""
        if not math.isfinite(monitored):
            raise DivergenceError(epoch, monitored)
        improved = self.best is None or monitored < self.best
        reduced = False
        if improved:
            self.best = monitored
            self.best_epoch = epoch
            self._lr_wait = 0
            self._stop_wait = 0
        else:
            self._lr_wait += 1
            self._stop_wait += 1
            if self._lr_wait >= self.lr_patience and self.lr > self.min_lr:
                self.lr = max(self.lr * self.factor, self.min_lr)
                self._lr_wait = 0
                reduced = True
        return CallbackDecision(
            epoch=epoch,
            improved=improved,
            checkpoint=improved,
            learning_rate=self.lr,
            reduced_lr=reduced,
            stop=self._stop_wait >= self.stop_patience,
        )


@dataclass
class EpochRecord:
    epoch: int
    train_loss: float
    train_accuracy: float
    val_loss: float
    val_accuracy: float
    learning_rate: float


@dataclass
class TrainHistory:
    epochs: list[EpochRecord] = field(default_factory=list)
    best_epoch: int = 0
    stop_reason: str = "completed"  # or "early_stopped"

    def monitored(self, monitor: str) -> list[float]:
        return [getattr(r, monitor) for r in self.epochs]

    def to_csv(self, path: Path) -> None:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow([
                "epoch", "train_loss", "train_accuracy", "val_loss", "val_accuracy",
                "learning_rate",
            ])
            for r in self.epochs:
                writer.writerow([
                    r.epoch, repr(r.train_loss), repr(r.train_accuracy),
                    repr(r.val_loss), repr(r.val_accuracy), repr(r.learning_rate),
                ])
            writer.writerow(["best_epoch", self.best_epoch, "stop_reason", self.stop_reason,
                             "", ""])

    @classmethod
    def from_csv(cls, path: Path) -> "TrainHistory":
        rows = list(csv.reader(Path(path).read_text(encoding="utf-8").splitlines()))
        if not rows:
            raise TrainError(f"empty history file {path}")
        history = cls()
        for row in rows[1:]:
            if row[0] == "best_epoch":
                history.best_epoch = int(row[1])
                history.stop_reason = row[3]
                continue
            history.epochs.append(EpochRecord(
                epoch=int(row[0]),
                train_loss=float(row[1]),
                train_accuracy=float(row[2]),
                val_loss=float(row[3]),
                val_accuracy=float(row[4]),
                learning_rate=float(row[5]),
            ))
        return history
