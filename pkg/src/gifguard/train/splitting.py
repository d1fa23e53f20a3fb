"""Deterministic train/val/test splitting and k-fold partitioning.

Global split sizes come from cumulative floors of the ratios, so 16,875
samples at 0.8/0.1/0.1 yield exactly 13,500/1,687/1,688 (the leftover after
flooring train and val lands in test). Stratification fills per-label floor
quotas first, then hands each label's leftover samples to the split with the
largest remaining deficit, which lands exactly on the global sizes.

With ``group_by_gif`` all frames of one GIF stay together: groups are
assigned greedily by frame mass, largest first, to the neediest split (or
lightest fold), so no GIF ever straddles a boundary.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from typing import Hashable, Sequence

import numpy as np

from ..errors import SplitError
from ..preprocess.frames import Split
from ..seeding import derive_seed

SPLIT_ORDER = (Split.TRAIN, Split.VAL, Split.TEST)


@dataclass(frozen=True)
class SplitItem:
    """Minimal view of one sample for assignment purposes."""

    key: Hashable
    gif_id: str
    label: str


@dataclass
class SplitAssignment:
    by_key: dict
    ratios: tuple[float, float, float]

    def members(self, split: Split) -> list:
        return [k for k, s in self.by_key.items() if s == split]

    def sizes(self) -> dict[Split, int]:
        out = {s: 0 for s in SPLIT_ORDER}
        for s in self.by_key.values():
            out[s] += 1
        return out


def _global_targets(n: int, ratios: Sequence[float]) -> list[int]:
    train = math.floor(ratios[0] * n)
    val = math.floor((ratios[0] + ratios[1]) * n) - train
    return [train, val, n - train - val]


def _by_label(items: Sequence[SplitItem]) -> dict[str, list[SplitItem]]:
    groups: dict[str, list[SplitItem]] = defaultdict(list)
    for item in items:
        groups[str(item.label)].append(item)
    return dict(sorted(groups.items()))


def split_dataset(items: Sequence[SplitItem], ratios: Sequence[float], seed: int,
                  group_by_gif: bool = True) -> SplitAssignment:
    """Partition samples into train/val/test.

    Stratified by label, deterministic in ``seed``, and grouped by GIF when
    requested. Raises when any split would end up empty.
    """
    if not items:
        raise SplitError("cannot split an empty dataset")
    keys = [item.key for item in items]
    if len(set(keys)) != len(keys):
        raise SplitError("duplicate sample keys in split input")
    ratios = tuple(float(r) for r in ratios)
    if group_by_gif:
        assignment = _split_grouped(items, ratios, seed)
    else:
        assignment = _split_flat(items, ratios, seed)
    sizes = assignment.sizes()
    empty = [s.value for s in SPLIT_ORDER if sizes[s] == 0 and ratios[SPLIT_ORDER.index(s)] > 0]
    if empty:
        raise SplitError(f"split(s) {empty} would be empty; dataset too small or too coarse")
    return assignment


def _split_flat(items: Sequence[SplitItem], ratios, seed: int) -> SplitAssignment:
    n = len(items)
    targets = _global_targets(n, ratios)
    assigned = [0, 0, 0]
    by_key: dict = {}
    leftover_items: list[SplitItem] = []
    # Phase 1: per-label floor quotas keep every split's label mix on ratio.
    for label, members in _by_label(items).items():
        rng = np.random.default_rng(derive_seed(seed, "split", label))
        order = rng.permutation(len(members))
        quotas = [math.floor(r * len(members)) for r in ratios]
        cursor = 0
        for s, quota in enumerate(quotas):
            for _ in range(quota):
                by_key[members[order[cursor]].key] = SPLIT_ORDER[s]
                assigned[s] += 1
                cursor += 1
        leftover_items.extend(members[order[c]] for c in range(cursor, len(members)))
    # Phase 2: hand each leftover to the split furthest below its global
    # target (ties favour train, then val); this lands exactly on the
    # cumulative-floor sizes.
    for item in leftover_items:
        deficits = [targets[s] - assigned[s] for s in range(3)]
        s = max(range(3), key=lambda i: (deficits[i], -i))
        by_key[item.key] = SPLIT_ORDER[s]
        assigned[s] += 1
    return SplitAssignment(by_key=by_key, ratios=ratios)


def _group_masses(items: Sequence[SplitItem]) -> dict[str, list[SplitItem]]:
    groups: dict[str, list[SplitItem]] = defaultdict(list)
    for item in items:
        groups[item.gif_id].append(item)
    return groups


def _split_grouped(items: Sequence[SplitItem], ratios, seed: int) -> SplitAssignment:
    groups = _group_masses(items)
    label_of_group = {}
    for gid, members in groups.items():
        labels = {str(m.label) for m in members}
        if len(labels) != 1:
            raise SplitError(f"gif {gid} carries multiple labels: {sorted(labels)}")
        label_of_group[gid] = labels.pop()

    by_key: dict = {}
    by_label_groups: dict[str, list[str]] = defaultdict(list)
    for gid, label in label_of_group.items():
        by_label_groups[label].append(gid)

    for label, gids in sorted(by_label_groups.items()):
        rng = np.random.default_rng(derive_seed(seed, "gsplit", label))
        gids = list(rng.permutation(sorted(gids)))
        # Largest-first greedy toward per-label frame-mass targets.
        gids.sort(key=lambda g: -len(groups[g]))
        mass = sum(len(groups[g]) for g in gids)
        targets = [r * mass for r in ratios]
        assigned = [0.0, 0.0, 0.0]
        for gid in gids:
            deficits = [targets[s] - assigned[s] for s in range(3)]
            s = max(range(3), key=lambda i: (deficits[i], -i))
            for member in groups[gid]:
                by_key[member.key] = SPLIT_ORDER[s]
            assigned[s] += len(groups[gid])
    return SplitAssignment(by_key=by_key, ratios=ratios)


def kfold_assignments(items: Sequence[SplitItem], k: int, seed: int,
                      group_by_gif: bool = True) -> list[list]:
    """Partition samples into k validation folds (lists of sample keys).

    Ungrouped: per-label shuffles dealt round-robin through a global cursor,
    so fold sizes are n//k with the first n%k folds one larger. Grouped:
    GIF groups go largest-first to the currently lightest fold.
    """
    if k < 2:
        raise SplitError("k must be >= 2")
    if len(items) < k:
        raise SplitError(f"cannot make {k} folds from {len(items)} samples")
    folds: list[list] = [[] for _ in range(k)]
    if not group_by_gif:
        cursor = 0
        for label, members in _by_label(items).items():
            rng = np.random.default_rng(derive_seed(seed, "kfold", label))
            for idx in rng.permutation(len(members)):
                folds[cursor % k].append(members[idx].key)
                cursor += 1
        return folds

    groups = _group_masses(items)
    by_label_groups: dict[str, list[str]] = defaultdict(list)
    for gid, members in groups.items():
        by_label_groups[str(members[0].label)].append(gid)
    masses = [0] * k
    for label, gids in sorted(by_label_groups.items()):
        rng = np.random.default_rng(derive_seed(seed, "gkfold", label))
        gids = list(rng.permutation(sorted(gids)))
        gids.sort(key=lambda g: -len(groups[g]))
        for gid in gids:
            f = min(range(k), key=lambda i: (masses[i], i))
            folds[f].extend(member.key for member in groups[gid])
            masses[f] += len(groups[gid])
    if any(not fold for fold in folds):
        raise SplitError("a fold received no samples; too few GIF groups for k")
    return folds
