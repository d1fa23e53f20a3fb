"""Synthetic two-class GIF dataset for end-to-end smoke runs.

Class A GIFs show a bright moving disc with text-like glyph rows; class B
GIFs show a dark moving ring. The classes are trivially separable on
purpose: the smoke test verifies the pipeline end to end, not the model's
ceiling. Every GIF gets a content-category override (face_and_text) and a
unanimous synthetic annotation, so the full annotate -> preprocess ->
train chain runs unmodified.
"""

from __future__ import annotations

import logging
from pathlib import Path

import numpy as np

from .annotate.records import AnnotationStore, Criterion, Round
from .annotate.service import AnnotationService
from .ingest.download import GifStore, build_manifest
from .ingest.records import DatasetManifest, save_manifest
from .labels import ContentCategory, Label
from .preprocess.categorize import save_overrides
from .preprocess.gifio import encode_gif
from .seeding import derive_seed

logger = logging.getLogger(__name__)

SIDE = 96


def _glyph_rows(frame: np.ndarray, rng: np.random.Generator) -> None:
    """Stamp two rows of bright dash glyphs near the bottom edge."""
    for row0 in (72, 82):
        col = 8
        while col < SIDE - 12:
            width = int(rng.integers(4, 9))
            frame[row0:row0 + 6, col:col + width] = 235
            col += width + 4


def _disc_frame(rng: np.random.Generator, t: int, n_frames: int) -> np.ndarray:
    frame = np.full((SIDE, SIDE, 3), 30, dtype=np.float64)
    frame += rng.normal(0, 6, size=frame.shape)
    angle = 2 * np.pi * t / max(2, n_frames)
    cy = SIDE / 2 + 10 * np.sin(angle)
    cx = SIDE / 2 + 10 * np.cos(angle)
    yy, xx = np.mgrid[0:SIDE, 0:SIDE]
    disc = (yy - cy) ** 2 + (xx - cx) ** 2 <= 22 ** 2
    frame[disc] = 215
    gray = frame[:, :, 0].copy()
    _glyph_rows(gray, rng)
    frame = np.stack([gray, gray * 0.97, gray * 0.9], axis=-1)
    return np.clip(frame, 0, 255).astype(np.uint8)


def _ring_frame(rng: np.random.Generator, t: int, n_frames: int) -> np.ndarray:
    frame = np.full((SIDE, SIDE, 3), 140, dtype=np.float64)
    frame += rng.normal(0, 6, size=frame.shape)
    angle = 2 * np.pi * t / max(2, n_frames)
    cy = SIDE / 2 + 8 * np.cos(angle)
    cx = SIDE / 2 + 8 * np.sin(angle)
    yy, xx = np.mgrid[0:SIDE, 0:SIDE]
    dist2 = (yy - cy) ** 2 + (xx - cx) ** 2
    ring = (dist2 <= 26 ** 2) & (dist2 >= 14 ** 2)
    frame[ring] = 15
    gray = frame[:, :, 0].copy()
    _glyph_rows(gray, rng)
    frame = np.stack([gray * 0.9, gray * 0.95, gray], axis=-1)
    return np.clip(frame, 0, 255).astype(np.uint8)


def render_gif(label: Label, index: int, seed: int,
               min_frames: int = 4, max_frames: int = 20) -> bytes:
    rng = np.random.default_rng(derive_seed(seed, "synth", label.value, index))
    n_frames = int(rng.integers(min_frames, max_frames + 1))
    render = _disc_frame if label == Label.CYBERBULLYING else _ring_frame
    frames = [render(rng, t, n_frames) for t in range(n_frames)]
    return encode_gif(frames)


def make_synthetic_dataset(data_root: Path, gifs_per_class: int = 40,
                           seed: int = 0) -> DatasetManifest:
    """Render GIFs, store them with sidecars, write the manifest, the
    category override table, and unanimous finalized annotations."""
    data_root = Path(data_root)
    data_root.mkdir(parents=True, exist_ok=True)
    store = GifStore(data_root)
    overrides: dict[str, ContentCategory] = {}
    from .ingest.records import GifRecord

    for label, tag in ((Label.CYBERBULLYING, "synthdisc"), (Label.NON_CYBERBULLYING, "synthring")):
        for i in range(gifs_per_class):
            gif_id = f"synth-{label.value}-{i:03d}"
            payload = render_gif(label, i, seed)
            record = GifRecord(
                id=gif_id,
                source_url=f"synthetic://{tag}/{i}",
                tag=tag,
                query_label=label,
            )
            store.store(record, payload)
            overrides[gif_id] = ContentCategory.FACE_AND_TEXT

    manifest = build_manifest(data_root)
    save_overrides(overrides, data_root / "overrides.jsonl")

    ann_store = AnnotationStore(data_root / "annotations.jsonl")
    service = AnnotationService(manifest, ann_store)
    all_ids = [rec.id for rec in manifest.records]
    service.assign(Round.ROUND1, "synth", all_ids)
    for rec in manifest.records:
        flags = frozenset()
        if rec.query_label == Label.CYBERBULLYING:
            flags = frozenset({Criterion.HOSTILE_GESTURE_OR_EXPRESSION})
        service.submit_label(rec.id, "synth", Round.ROUND1, rec.query_label, flags)
    manifest, summary = service.finalize_labels(manifest)
    save_manifest(manifest, data_root / "manifest.jsonl")
    logger.info("synthetic dataset: %s", summary)
    return manifest
