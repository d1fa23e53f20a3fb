"""Frame sampling, the per-GIF frame cap, and near-duplicate removal.

GIFs carry anywhere from a couple to a few hundred frames; each GIF is
represented by at most ``frame_cap`` frames sampled evenly across its length
(always keeping the first and last frame), after which consecutive
near-duplicates are dropped by perceptual-hash distance.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..errors import PreprocessError
from ..labels import Label
from .gifio import decode_gif
from .hashing import hamming_distance, perceptual_hash


class Split(str, enum.Enum):
    TRAIN = "train"
    VAL = "val"
    TEST = "test"
    UNASSIGNED = "unassigned"


@dataclass(frozen=True)
class Provenance:
    """Where a frame came from: decoded from the GIF, or synthesized from a
    parent frame by an augmentation draw."""

    kind: str = "original"  # "original" | "augmented"
    parent_index: Optional[int] = None
    variant: Optional[int] = None
    transform: Optional[dict] = None

    @classmethod
    def original(cls) -> "Provenance":
        return cls()

    @classmethod
    def augmented(cls, parent_index: int, variant: int, transform: dict) -> "Provenance":
        return cls("augmented", parent_index, variant, transform)


@dataclass
class FrameSample:
    gif_id: str
    frame_index: int
    image: np.ndarray
    label: Optional[Label] = None
    split: Split = Split.UNASSIGNED
    provenance: Provenance = field(default_factory=Provenance.original)


@dataclass
class PreprocessConfig:
    frame_cap: int = 16
    hash_bits: int = 64
    dup_hamming_threshold: int = 5
    blur_threshold: float = 100.0
    target_side: int = 224

    def __post_init__(self):
        if self.frame_cap < 1:
            raise PreprocessError("frame_cap must be >= 1")
        if not 0 <= self.dup_hamming_threshold <= self.hash_bits:
            raise PreprocessError("dup_hamming_threshold must be within [0, hash_bits]")
        if self.blur_threshold < 0:
            raise PreprocessError("blur_threshold must be >= 0")


def sample_indices(n_frames: int, cap: int) -> list[int]:
    """Indices of the frames to keep: all of them when n <= cap, otherwise
    min(n, cap) indices evenly spaced over [0, n-1] including both ends.

    Spacing >= 1 guarantees the rounded indices are strictly increasing, so
    no frame is picked twice.
    """
    if n_frames < 1:
        raise PreprocessError("GIF reports zero frames")
    if cap < 1:
        raise PreprocessError("cap must be >= 1")
    if n_frames <= cap:
        return list(range(n_frames))
    if cap == 1:
        return [0]
    positions = np.linspace(0, n_frames - 1, cap)
    return [int(round(p)) for p in positions]


def extract_frames(gif_bytes: bytes, cap: int, gif_id: str = "<bytes>") -> list[FrameSample]:
    """Decode a GIF and return its capped, composited RGB frame samples."""
    frames = decode_gif(gif_bytes, name=gif_id)
    return [
        FrameSample(gif_id=gif_id, frame_index=idx, image=frames[idx])
        for idx in sample_indices(len(frames), cap)
    ]


def dedup_frames(frames: list[FrameSample], threshold: int,
                 hash_bits: int = 64) -> list[FrameSample]:
    """Greedy forward pass dropping frames within ``threshold`` Hamming
    distance of the most recently kept frame. The first frame is always
    kept and order is preserved; a second pass is a no-op."""
    kept: list[FrameSample] = []
    last_hash: Optional[int] = None
    for frame in frames:
        h = perceptual_hash(frame.image, hash_bits)
        if last_hash is None or hamming_distance(h, last_hash) > threshold:
            kept.append(frame)
            last_hash = h
    return kept
