"""Dataset-level augmentation with provenance and a leakage guard.

Every input frame is kept and joined by ``factor - 1`` augmented variants.
Per-variant seeds derive from (seed, gif_id, frame_index, variant), so the
result is reproducible and independent of iteration order. By default only
training-split frames may be augmented; ``paper_mode`` lifts that guard for
replicating runs where augmentation preceded the split (which leaks
augmented siblings across splits).
"""

from __future__ import annotations

import logging
from typing import Sequence

import numpy as np

from ..errors import SplitLeakageError
from ..preprocess.frames import FrameSample, Provenance, Split
from ..seeding import derive_seed
from .affine import AugmentParams, TransformDraw, augment_frame, draw_transform

logger = logging.getLogger(__name__)


def variant_draw(params: AugmentParams, gif_id: str, frame_index: int,
                 variant: int) -> TransformDraw:
    rng = np.random.default_rng(derive_seed(params.seed, gif_id, frame_index, variant))
    return draw_transform(params, rng)


def augment_dataset(frames: Sequence[FrameSample], params: AugmentParams,
                    paper_mode: bool = False) -> list[FrameSample]:
    """Expand frames to exactly ``factor × len(frames)`` samples."""
    offenders = [f for f in frames if f.split != Split.TRAIN]
    if offenders and not paper_mode:
        raise SplitLeakageError(
            f"{len(offenders)} input frames are not in the training split "
            f"(first: {offenders[0].gif_id}/{offenders[0].frame_index}); "
            "augmenting them would leak variants across splits"
        )
    if offenders:
        logger.warning("paper_mode: augmenting %d non-training frames", len(offenders))

    out: list[FrameSample] = []
    for frame in frames:
        out.append(frame)
        for variant in range(1, params.factor):
            draw = variant_draw(params, frame.gif_id, frame.frame_index, variant)
            out.append(FrameSample(
                gif_id=frame.gif_id,
                frame_index=frame.frame_index,
                image=augment_frame(frame.image, draw, params.fill_mode),
                label=frame.label,
                split=frame.split,
                provenance=Provenance.augmented(frame.frame_index, variant, draw.to_json()),
            ))
    return out
