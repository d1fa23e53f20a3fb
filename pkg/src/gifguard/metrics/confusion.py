"""Confusion matrix over a fixed class order."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..errors import MetricsError


@dataclass
class ConfusionMatrix:
    """K×K counts; entry [i][j] = samples of true class i predicted as j."""

    counts: np.ndarray
    class_names: list[str]

    def __post_init__(self):
        self.counts = np.asarray(self.counts, dtype=np.int64)
        k = len(self.class_names)
        if self.counts.shape != (k, k):
            raise MetricsError(
                f"matrix shape {self.counts.shape} does not match {k} class names"
            )
        if (self.counts < 0).any():
            raise MetricsError("confusion matrix entries must be non-negative")

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    @property
    def trace(self) -> int:
        return int(np.trace(self.counts))

    def supports(self) -> np.ndarray:
        return self.counts.sum(axis=1)

    def permuted(self, order: Sequence[int]) -> "ConfusionMatrix":
        idx = list(order)
        return ConfusionMatrix(
            counts=self.counts[np.ix_(idx, idx)],
            class_names=[self.class_names[i] for i in idx],
        )

    def to_csv(self) -> str:
        lines = ["true\\predicted," + ",".join(self.class_names)]
        for name, row in zip(self.class_names, self.counts):
            lines.append(name + "," + ",".join(str(int(v)) for v in row))
        return "\n".join(lines) + "\n"

    def __add__(self, other: "ConfusionMatrix") -> "ConfusionMatrix":
        if self.class_names != other.class_names:
            raise MetricsError("cannot add confusion matrices over different classes")
        return ConfusionMatrix(self.counts + other.counts, list(self.class_names))


def confusion(true_labels: Sequence, predicted_labels: Sequence,
              class_names: Sequence[str]) -> ConfusionMatrix:
    """Count (true, predicted) pairs into a matrix over ``class_names``."""
    if len(true_labels) != len(predicted_labels):
        raise MetricsError(
            f"label sequences differ in length: {len(true_labels)} vs {len(predicted_labels)}"
        )
    if len(true_labels) == 0:
        raise MetricsError("no samples")
    names = [getattr(c, "value", c) for c in class_names]
    index = {name: i for i, name in enumerate(names)}
    counts = np.zeros((len(names), len(names)), dtype=np.int64)
    for t, p in zip(true_labels, predicted_labels):
        t = getattr(t, "value", t)
        p = getattr(p, "value", p)
        if t not in index or p not in index:
            raise MetricsError(f"label outside class list: {t!r} / {p!r}")
        counts[index[t], index[p]] += 1
    return ConfusionMatrix(counts=counts, class_names=names)
