"""Training-history curve export: CSV plus rendered accuracy/loss figures."""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from ..errors import MetricsError

CURVE_COLUMNS = [
    "epoch", "train_accuracy", "val_accuracy", "train_loss", "val_loss", "learning_rate",
]


def export_curves(history, out_dir: Path) -> dict[str, Path]:
    """Write curves.csv, accuracy.png and loss.png for one training run."""
    if not history.epochs:
        raise MetricsError("cannot export curves for an empty history")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    csv_path = out_dir / "curves.csv"
    with csv_path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(CURVE_COLUMNS)
        for row in history.epochs:
            writer.writerow([
                row.epoch,
                repr(row.train_accuracy),
                repr(row.val_accuracy),
                repr(row.train_loss),
                repr(row.val_loss),
                repr(row.learning_rate),
            ])

    epochs = [r.epoch for r in history.epochs]
    paths = {"csv": csv_path}
    for kind, train_key, val_key in (
        ("accuracy", "train_accuracy", "val_accuracy"),
        ("loss", "train_loss", "val_loss"),
    ):
        fig, ax = plt.subplots(figsize=(6, 4))
        ax.plot(epochs, [getattr(r, train_key) for r in history.epochs], label="train")
        ax.plot(epochs, [getattr(r, val_key) for r in history.epochs], label="validation")
        ax.set_xlabel("epoch")
        ax.set_ylabel(kind)
        ax.legend()
        fig.tight_layout()
        png = out_dir / f"{kind}.png"
        fig.savefig(png)
        plt.close(fig)
        paths[kind] = png
    return paths
