"""Frame dataset construction and its on-disk index.

Frames live under ``<data_root>/frames/<gif_id>/<name>.png`` with a JSON
Lines index describing every sample (image referenced by path). Blurred
frames stay on disk and in the index, flagged excluded, so the filtering is
auditable and reversible.
"""

from __future__ import annotations

import csv
import io
import json
import logging
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Mapping, Optional

import numpy as np
from PIL import Image

from ..errors import EmptyDatasetError, PreprocessError
from ..labels import ContentCategory, GifStatus, Label
from ..ingest.records import DatasetManifest
from .categorize import Detector, categorize_content, default_face_detector, default_text_detector
from .frames import PreprocessConfig, Provenance, Split, dedup_frames, extract_frames
from .hashing import perceptual_hash
from .quality import blur_score

logger = logging.getLogger(__name__)

INDEX_NAME = "frames/index.jsonl"


@dataclass
class FrameIndexEntry:
    gif_id: str
    frame_index: int
    path: str
    label: Label
    split: Split = Split.UNASSIGNED
    provenance: Provenance = field(default_factory=Provenance.original)
    excluded: bool = False
    exclude_reason: str = ""
    blur: float = 0.0
    phash: str = ""

    @property
    def key(self) -> str:
        if self.provenance.kind == "augmented":
            return f"{self.gif_id}/{self.frame_index}/aug{self.provenance.variant}"
        return f"{self.gif_id}/{self.frame_index}"

    def to_json(self) -> dict:
        prov = {"kind": self.provenance.kind}
        if self.provenance.kind == "augmented":
            prov["parent_index"] = self.provenance.parent_index
            prov["variant"] = self.provenance.variant
            prov["transform"] = self.provenance.transform
        return {
            "gif_id": self.gif_id,
            "frame_index": self.frame_index,
            "path": self.path,
            "label": self.label.value,
            "split": self.split.value,
            "provenance": prov,
            "excluded": self.excluded,
            "exclude_reason": self.exclude_reason,
            "blur": self.blur,
            "phash": self.phash,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "FrameIndexEntry":
        prov_obj = obj.get("provenance", {"kind": "original"})
        if prov_obj.get("kind") == "augmented":
            prov = Provenance.augmented(
                prov_obj["parent_index"], prov_obj["variant"], prov_obj.get("transform")
            )
        else:
            prov = Provenance.original()
        return cls(
            gif_id=obj["gif_id"],
            frame_index=int(obj["frame_index"]),
            path=obj["path"],
            label=Label(obj["label"]),
            split=Split(obj.get("split", "unassigned")),
            provenance=prov,
            excluded=bool(obj.get("excluded", False)),
            exclude_reason=obj.get("exclude_reason", ""),
            blur=float(obj.get("blur", 0.0)),
            phash=obj.get("phash", ""),
        )


def save_index(entries: list[FrameIndexEntry], data_root: Path) -> Path:
    path = Path(data_root) / INDEX_NAME
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as fh:
        for entry in entries:
            fh.write(json.dumps(entry.to_json(), sort_keys=True) + "\n")
    return path


def load_index(data_root: Path) -> list[FrameIndexEntry]:
    path = Path(data_root) / INDEX_NAME
    if not path.exists():
        raise PreprocessError(f"no frame index at {path}; run the preprocess stage first")
    return [
        FrameIndexEntry.from_json(json.loads(line))
        for line in path.read_text(encoding="utf-8").splitlines()
        if line.strip()
    ]


def save_frame_image(image: np.ndarray, data_root: Path, relpath: str) -> None:
    path = Path(data_root) / relpath
    path.parent.mkdir(parents=True, exist_ok=True)
    Image.fromarray(np.asarray(image, dtype=np.uint8), "RGB").save(path, format="PNG")


def load_frame_image(data_root: Path, relpath: str) -> np.ndarray:
    with Image.open(Path(data_root) / relpath) as im:
        return np.asarray(im.convert("RGB"), dtype=np.uint8)


@dataclass
class DatasetSummary:
    """Per-label GIF and frame tallies for the cleaned dataset."""

    rows: list[dict]

    def to_text(self) -> str:
        headers = ["Class", "GIFs", "Frames kept", "Frames excluded"]
        table = [[str(r["label"]), str(r["gifs"]), str(r["frames_kept"]),
                  str(r["frames_excluded"])] for r in self.rows]
        widths = [max(len(h), *(len(row[i]) for row in table)) for i, h in enumerate(headers)]
        fmt = "  ".join(f"{{:<{w}}}" for w in widths)
        lines = [fmt.format(*headers)]
        lines += [fmt.format(*row) for row in table]
        return "\n".join(lines)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["class", "gifs", "frames_kept", "frames_excluded"])
        for r in self.rows:
            writer.writerow([r["label"], r["gifs"], r["frames_kept"], r["frames_excluded"]])
        return buf.getvalue()


def summarize(entries: list[FrameIndexEntry]) -> DatasetSummary:
    rows = []
    for label in Label:
        sub = [e for e in entries if e.label == label]
        rows.append({
            "label": label.value,
            "gifs": len({e.gif_id for e in sub}),
            "frames_kept": sum(1 for e in sub if not e.excluded),
            "frames_excluded": sum(1 for e in sub if e.excluded),
        })
    rows.append({
        "label": "total",
        "gifs": len({e.gif_id for e in entries}),
        "frames_kept": sum(1 for e in entries if not e.excluded),
        "frames_excluded": sum(1 for e in entries if e.excluded),
    })
    return DatasetSummary(rows)


def build_frame_dataset(
    manifest: DatasetManifest,
    config: PreprocessConfig,
    final_labels: Mapping[str, Label],
    data_root: Path,
    media_loader=None,
    text_detector: Detector = default_text_detector,
    face_detector: Detector = default_face_detector,
    overrides: Optional[Mapping[str, ContentCategory]] = None,
) -> tuple[list[FrameIndexEntry], DatasetSummary, DatasetManifest]:
    """Run extraction, dedup, blur flagging and categorization over a
    finalized manifest.

    Only GIFs categorized face_and_text contribute frames. Returns the index
    entries, the summary table, and the manifest with categories and
    statuses updated.
    """
    data_root = Path(data_root)
    overrides = overrides or {}
    if media_loader is None:
        media_loader = lambda rec: (data_root / rec.media_path).read_bytes()

    missing = [
        rec.id for rec in manifest.records
        if rec.status != GifStatus.EXCLUDED and rec.id not in final_labels
    ]
    if missing:
        raise PreprocessError(
            "manifest is not finalized; GIFs without a final label: " + ", ".join(sorted(missing))
        )

    entries: list[FrameIndexEntry] = []
    updated = []
    for rec in manifest.records:
        if rec.status == GifStatus.EXCLUDED:
            updated.append(rec)
            continue
        label = final_labels[rec.id]
        samples = extract_frames(media_loader(rec), config.frame_cap, gif_id=rec.id)
        category = categorize_content(
            [s.image for s in samples],
            text_detector=text_detector,
            face_detector=face_detector,
            override=overrides.get(rec.id),
        )
        if category != ContentCategory.FACE_AND_TEXT:
            updated.append(replace(rec, content_category=category))
            continue
        kept = dedup_frames(samples, config.dup_hamming_threshold, config.hash_bits)
        for sample in kept:
            relpath = f"frames/{rec.id}/{sample.frame_index:05d}.png"
            save_frame_image(sample.image, data_root, relpath)
            score = blur_score(sample.image)
            blurred = score < config.blur_threshold
            entries.append(FrameIndexEntry(
                gif_id=rec.id,
                frame_index=sample.frame_index,
                path=relpath,
                label=label,
                excluded=blurred,
                exclude_reason="blur" if blurred else "",
                blur=score,
                phash=format(perceptual_hash(sample.image, config.hash_bits),
                             f"0{config.hash_bits // 4}x"),
            ))
        updated.append(replace(rec, content_category=category, status=GifStatus.CLEANED))

    if not any(not e.excluded for e in entries):
        raise EmptyDatasetError("no qualifying GIFs: nothing categorized face_and_text survived")
    summary = summarize(entries)
    return entries, summary, manifest.with_records(updated)
