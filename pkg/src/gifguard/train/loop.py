"""Hold-out training and k-fold cross-validation.

With the backbone frozen its pooled features never change, so they are
computed once per dataset and the epoch loop trains only the head — the
arithmetic is identical to pushing images through the full network every
epoch, just without redundant convolution work. Unfrozen bases take the
full-model path.

Checkpoints: the head state is saved whenever the monitored loss improves;
the model returned is the best checkpoint, not the last epoch.
"""

from __future__ import annotations

import hashlib
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional, Sequence

import numpy as np
import torch
import torch.nn.functional as F

from ..errors import TrainError
from ..labels import CLASS_NAMES
from ..metrics.confusion import confusion
from ..metrics.report import EvalReport, FoldPredictions, aggregate_fold_reports, classification_report
from ..model.classifier import GifClassifier
from ..seeding import derive_seed
from .callbacks import CallbackState, EpochRecord, TrainHistory
from .class_weights import compute_class_weights
from .config import TrainConfig
from .splitting import SplitItem, kfold_assignments

logger = logging.getLogger(__name__)


@dataclass
class ArrayDataset:
    """In-memory dataset: float32 images in [0, 1], integer class indices,
    and a per-sample key carrying (gif_id, ...) identity."""

    images: np.ndarray
    labels: np.ndarray
    keys: list = field(default_factory=list)
    gif_ids: list = field(default_factory=list)

    def __post_init__(self):
        self.images = np.asarray(self.images, dtype=np.float32)
        self.labels = np.asarray(self.labels, dtype=np.int64)
        if len(self.images) != len(self.labels):
            raise TrainError("images and labels differ in length")
        if not self.keys:
            self.keys = list(range(len(self.labels)))
        if not self.gif_ids:
            self.gif_ids = [str(k) for k in self.keys]

    def __len__(self) -> int:
        return len(self.labels)

    def subset(self, indices: Sequence[int]) -> "ArrayDataset":
        idx = list(indices)
        return ArrayDataset(
            images=self.images[idx],
            labels=self.labels[idx],
            keys=[self.keys[i] for i in idx],
            gif_ids=[self.gif_ids[i] for i in idx],
        )

    def digest(self) -> str:
        h = hashlib.sha256()
        h.update(repr((self.images.shape, list(map(str, self.keys)),
                       self.labels.tolist())).encode())
        if len(self.images):
            h.update(self.images[0].tobytes())
            h.update(self.images[-1].tobytes())
        return h.hexdigest()


def _to_nchw(images: np.ndarray) -> torch.Tensor:
    return torch.from_numpy(np.ascontiguousarray(images.transpose(0, 3, 1, 2)))


def _batched(n: int, batch_size: int):
    for start in range(0, n, batch_size):
        yield slice(start, min(start + batch_size, n))


def extract_pooled_features(model: GifClassifier, images: np.ndarray,
                            batch_size: int = 32) -> torch.Tensor:
    chunks = []
    with torch.no_grad():
        for sl in _batched(len(images), batch_size):
            chunks.append(model.forward_features(_to_nchw(images[sl])))
    return torch.cat(chunks) if chunks else torch.zeros((0, 512))


def _class_weight_tensor(labels: np.ndarray, num_classes: int, mode: str) -> torch.Tensor:
    if mode == "none":
        return torch.ones(num_classes)
    weights = compute_class_weights(labels.tolist(), classes=list(range(num_classes)))
    return torch.tensor([float(weights[c]) for c in range(num_classes)], dtype=torch.float32)


@dataclass
class _ForwardPlan:
    """Either cached head inputs (frozen base) or raw images (full model)."""

    model: GifClassifier
    train_inputs: torch.Tensor | np.ndarray
    val_inputs: torch.Tensor | np.ndarray
    cached: bool

    def logits(self, which: str, idx) -> torch.Tensor:
        inputs = self.train_inputs if which == "train" else self.val_inputs
        if self.cached:
            return self.model.head_logits(inputs[idx])
        return self.model(_to_nchw(inputs[idx]))


def train_holdout(model: GifClassifier, train_ds: ArrayDataset, val_ds: ArrayDataset,
                  config: TrainConfig, run_dir: Optional[Path] = None
                  ) -> tuple[GifClassifier, TrainHistory]:
    """Train with class-weighted cross-entropy under the callback protocol;
    returns the model restored to its best checkpoint plus the history."""
    if len(train_ds) == 0 or len(val_ds) == 0:
        raise TrainError("training and validation sets must be non-empty")
    torch.manual_seed(derive_seed(config.seed, "torch"))

    num_classes = model.spec.num_classes
    weights = _class_weight_tensor(train_ds.labels, num_classes, config.class_weight_mode)

    if model.spec.freeze_base:
        plan = _ForwardPlan(
            model=model,
            train_inputs=extract_pooled_features(model, train_ds.images, config.batch_size),
            val_inputs=extract_pooled_features(model, val_ds.images, config.batch_size),
            cached=True,
        )
        base_before = {k: v.detach().clone() for k, v in model.features.state_dict().items()}
        trainable = model.head_parameters()
    else:
        plan = _ForwardPlan(model, train_ds.images, val_ds.images, cached=False)
        base_before = None
        trainable = [p for p in model.parameters() if p.requires_grad]

    optimizer = torch.optim.Adam(trainable, lr=config.initial_lr)
    callbacks = CallbackState(
        initial_lr=config.initial_lr,
        lr_reduce_factor=config.lr_reduce_factor,
        lr_patience=config.lr_patience,
        min_lr=config.min_lr,
        early_stop_patience=config.early_stop_patience,
    )
    history = TrainHistory()
    train_y = torch.from_numpy(train_ds.labels)
    val_y = torch.from_numpy(val_ds.labels)
    best_state = model.head_state()
    checkpoints_dir = Path(run_dir) / "checkpoints" if run_dir else None

    for epoch in range(1, config.epochs + 1):
        lr_in_effect = optimizer.param_groups[0]["lr"]
        rng = np.random.default_rng(derive_seed(config.seed, "epoch", epoch))
        order = rng.permutation(len(train_ds))
        model.train()
        loss_weight_sum = 0.0
        weighted_loss_sum = 0.0
        correct = 0
        for sl in _batched(len(order), config.batch_size):
            idx = order[sl]
            y = train_y[idx]
            logits = plan.logits("train", idx)
            loss = F.cross_entropy(logits, y, weight=weights)
            optimizer.zero_grad()
            loss.backward()
            optimizer.step()
            with torch.no_grad():
                batch_w = float(weights[y].sum())
                weighted_loss_sum += float(loss) * batch_w
                loss_weight_sum += batch_w
                correct += int((logits.argmax(dim=1) == y).sum())
        train_loss = weighted_loss_sum / loss_weight_sum
        train_acc = correct / len(train_ds)

        model.eval()
        with torch.no_grad():
            val_logits = torch.cat([
                plan.logits("val", np.arange(sl.start, sl.stop))
                for sl in _batched(len(val_ds), config.batch_size)
            ])
            val_loss = float(F.cross_entropy(val_logits, val_y))
            val_acc = float((val_logits.argmax(dim=1) == val_y).float().mean())

        history.epochs.append(EpochRecord(
            epoch=epoch,
            train_loss=train_loss,
            train_accuracy=train_acc,
            val_loss=val_loss,
            val_accuracy=val_acc,
            learning_rate=lr_in_effect,
        ))
        monitored = val_loss if config.early_stop_monitor == "val_loss" else train_loss
        decision = callbacks.update(epoch, monitored)
        if decision.checkpoint:
            best_state = model.head_state()
            if checkpoints_dir:
                checkpoints_dir.mkdir(parents=True, exist_ok=True)
                torch.save(best_state, checkpoints_dir / f"epoch_{epoch}.pt")
                torch.save(best_state, checkpoints_dir / "best.pt")
        if decision.reduced_lr:
            for group in optimizer.param_groups:
                group["lr"] = decision.learning_rate
            logger.info("epoch %d: reduced learning rate to %g", epoch, decision.learning_rate)
        if decision.stop:
            history.stop_reason = "early_stopped"
            logger.info("early stopping after epoch %d", epoch)
            break

    history.best_epoch = callbacks.best_epoch or len(history.epochs)
    model.load_head_state(best_state)
    model.eval()

    if base_before is not None:
        for key, value in model.features.state_dict().items():
            if not torch.equal(value, base_before[key]):
                raise TrainError(f"frozen backbone weight {key} changed during training")

    if run_dir:
        run_dir = Path(run_dir)
        run_dir.mkdir(parents=True, exist_ok=True)
        history.to_csv(run_dir / "history.csv")
    return model, history


def predict_classes(model: GifClassifier, dataset: ArrayDataset,
                    batch_size: int = 32) -> np.ndarray:
    """Predicted class index per sample."""
    outputs = []
    with torch.no_grad():
        for sl in _batched(len(dataset), batch_size):
            logits = model(_to_nchw(dataset.images[sl]))
            outputs.append(logits.argmax(dim=1).numpy())
    return np.concatenate(outputs) if outputs else np.zeros(0, dtype=np.int64)


@dataclass
class FoldResult:
    fold: int
    report: EvalReport
    history: TrainHistory


@dataclass
class KFoldResult:
    folds: list[FoldResult]
    aggregate: EvalReport


def kfold_train(pool: ArrayDataset, config: TrainConfig,
                model_builder: Callable[[int], GifClassifier],
                run_dir: Optional[Path] = None,
                class_names: Sequence[str] = CLASS_NAMES) -> KFoldResult:
    """Cross-validate: each fold is the validation set exactly once, with a
    fresh head per fold; the aggregate report pools all validation
    predictions."""
    items = [
        SplitItem(key=i, gif_id=pool.gif_ids[i], label=int(pool.labels[i]))
        for i in range(len(pool))
    ]
    folds = kfold_assignments(items, config.k_folds, config.seed, config.group_by_gif)
    results: list[FoldResult] = []
    fold_predictions: list[FoldPredictions] = []
    for f, val_keys in enumerate(folds):
        val_idx = sorted(val_keys)
        val_set = set(val_idx)
        train_idx = [i for i in range(len(pool)) if i not in val_set]
        train_ds = pool.subset(train_idx)
        val_ds = pool.subset(val_idx)
        for name, part in (("training", train_ds), ("validation", val_ds)):
            if len(np.unique(part.labels)) < 2:
                raise TrainError(f"fold {f}: {name} part contains only one class")
        fold_dir = Path(run_dir) / f"fold_{f}" if run_dir else None
        model = model_builder(derive_seed(config.seed, "fold", f))
        model, history = train_holdout(model, train_ds, val_ds, config, run_dir=fold_dir)
        predicted = predict_classes(model, val_ds, config.batch_size)
        true_names = [class_names[c] for c in val_ds.labels]
        pred_names = [class_names[c] for c in predicted]
        report = classification_report(confusion(true_names, pred_names, class_names))
        results.append(FoldResult(fold=f, report=report, history=history))
        fold_predictions.append(FoldPredictions(
            keys=list(val_ds.keys), true_labels=true_names, predicted_labels=pred_names
        ))
        logger.info("fold %d: accuracy %.4f over %d samples",
                    f, report.accuracy, report.total_support)
    aggregate = aggregate_fold_reports(fold_predictions, class_names)
    return KFoldResult(folds=results, aggregate=aggregate)


def write_run_config(run_dir: Path, config: TrainConfig, dataset_digest: str,
                     extra: Optional[dict] = None) -> None:
    """run.json: everything needed to reproduce the run. The environment
    stamp is version strings only (stable per machine), so reruns stay
    byte-identical; wall-clock times do not belong here."""
    import platform
    import sys

    run_dir = Path(run_dir)
    run_dir.mkdir(parents=True, exist_ok=True)
    obj = {
        "train_config": {
            **{k: getattr(config, k) for k in (
                "epochs", "k_folds", "batch_size", "initial_lr", "lr_reduce_factor",
                "lr_patience", "min_lr", "early_stop_patience", "early_stop_monitor",
                "class_weight_mode", "seed", "group_by_gif", "paper_mode",
            )},
            "split_ratios": list(config.split_ratios),
        },
        "dataset_digest": dataset_digest,
        "environment": {
            "python": sys.version.split()[0],
            "torch": torch.__version__,
            "numpy": np.__version__,
            "platform": platform.platform(),
        },
    }
    if extra:
        obj.update(extra)
    (run_dir / "run.json").write_text(
        json.dumps(obj, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
