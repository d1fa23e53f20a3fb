"""Record types for collected GIFs and the dataset manifest.

The manifest is stored as JSON Lines: a header line carrying the schema
version and per-label counts, then one GifRecord per line. Creation
timestamps live in a sidecar ``.meta.json`` so that re-running a collection
against the same inputs produces a byte-identical manifest.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from pathlib import Path

from ..errors import IngestError
from ..labels import ContentCategory, GifStatus, Label

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class HashtagSeed:
    """One search seed: a bare hashtag plus the label its results inherit."""

    tag: str
    query_label: Label

    def __post_init__(self):
        if not self.tag:
            raise IngestError("seed tag must be non-empty")
        if self.tag != self.tag.lower() or any(c.isspace() for c in self.tag):
            raise IngestError(f"seed tag must be lowercase without whitespace: {self.tag!r}")
        if self.tag.startswith("#"):
            raise IngestError(f"seed tag must not carry a leading '#': {self.tag!r}")


@dataclass
class GifRecord:
    id: str
    source_url: str
    tag: str
    query_label: Label
    media_path: str = ""
    sha256: str = ""
    frame_count: int = 1
    content_category: ContentCategory = ContentCategory.UNKNOWN
    status: GifStatus = GifStatus.DOWNLOADED

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "source_url": self.source_url,
            "tag": self.tag,
            "query_label": self.query_label.value,
            "media_path": self.media_path,
            "sha256": self.sha256,
            "frame_count": self.frame_count,
            "content_category": self.content_category.value,
            "status": self.status.value,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "GifRecord":
        return cls(
            id=obj["id"],
            source_url=obj["source_url"],
            tag=obj["tag"],
            query_label=Label(obj["query_label"]),
            media_path=obj.get("media_path", ""),
            sha256=obj.get("sha256", ""),
            frame_count=int(obj.get("frame_count", 1)),
            content_category=ContentCategory(obj.get("content_category", "unknown")),
            status=GifStatus(obj.get("status", "downloaded")),
        )


@dataclass
class DatasetManifest:
    records: list[GifRecord] = field(default_factory=list)
    created_at: datetime = field(default_factory=lambda: datetime.now(timezone.utc))
    schema_version: int = SCHEMA_VERSION

    @property
    def counts(self) -> dict[str, int]:
        out = {label.value: 0 for label in Label}
        for rec in self.records:
            out[rec.query_label.value] += 1
        return out

    def __len__(self) -> int:
        return len(self.records)

    def by_id(self) -> dict[str, GifRecord]:
        return {rec.id: rec for rec in self.records}

    def validate(self) -> None:
        ids = [rec.id for rec in self.records]
        if len(set(ids)) != len(ids):
            raise IngestError("manifest contains duplicate record ids")
        digests = [rec.sha256 for rec in self.records if rec.sha256]
        if len(set(digests)) != len(digests):
            raise IngestError("manifest contains duplicate sha256 digests")

    def with_records(self, records: list[GifRecord]) -> "DatasetManifest":
        return replace(self, records=list(records))


def save_manifest(manifest: DatasetManifest, path: Path) -> None:
    manifest.validate()
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    header = {"schema_version": manifest.schema_version, "counts": manifest.counts}
    lines = [json.dumps(header, sort_keys=True)]
    lines += [json.dumps(rec.to_json(), sort_keys=True) for rec in manifest.records]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    meta = {"created_at": manifest.created_at.isoformat()}
    path.with_suffix(path.suffix + ".meta.json").write_text(
        json.dumps(meta, indent=2) + "\n", encoding="utf-8"
    )


def load_manifest(path: Path) -> DatasetManifest:
    path = Path(path)
    lines = [ln for ln in path.read_text(encoding="utf-8").splitlines() if ln.strip()]
    if not lines:
        raise IngestError(f"manifest {path} is empty")
    header = json.loads(lines[0])
    if "schema_version" not in header:
        raise IngestError(f"manifest {path} lacks a schema_version header line")
    records = [GifRecord.from_json(json.loads(ln)) for ln in lines[1:]]
    created = datetime.now(timezone.utc)
    meta_path = path.with_suffix(path.suffix + ".meta.json")
    if meta_path.exists():
        created = datetime.fromisoformat(json.loads(meta_path.read_text())["created_at"])
    manifest = DatasetManifest(
        records=records, created_at=created, schema_version=int(header["schema_version"])
    )
    manifest.validate()
    return manifest
