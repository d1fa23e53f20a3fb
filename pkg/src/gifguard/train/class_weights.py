"""Inverse-frequency class weights.

Weights are exact rationals, w_c = N / (K * n_c), so the weighted sample
total sums back to N exactly (floats would drift by a few ULP). Cast to
float at the point the optimizer consumes them.
"""

from __future__ import annotations

from collections import Counter
from fractions import Fraction
from typing import Hashable, Sequence

from ..errors import TrainError


def compute_class_weights(labels: Sequence[Hashable],
                          classes: Sequence[Hashable] | None = None) -> dict:
    if not labels:
        raise TrainError("cannot weight an empty label sequence")
    counts = Counter(labels)
    if classes is None:
        classes = sorted(counts, key=str)
    missing = [c for c in classes if counts.get(c, 0) == 0]
    if missing:
        raise TrainError(f"classes with no samples: {missing}")
    n = len(labels)
    k = len(classes)
    return {c: Fraction(n, k * counts[c]) for c in classes}


def sample_weights(labels: Sequence[Hashable], weights: dict) -> list[Fraction]:
    return [weights[label] for label in labels]
