"""Media download and on-disk GIF store.

Layout under a data root:

    gifs/<sha256-first2>/<sha256>.gif      raw media, written atomically
    gifs/<sha256-first2>/<sha256>.json     sidecar with the record fields

Downloads may run in parallel; the store itself is only touched by the
single thread draining the futures, so readers always see either no entry
or a complete (media, sidecar) pair.
"""

from __future__ import annotations

import hashlib
import io
import json
import logging
import os
import tempfile
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import replace
from pathlib import Path

from PIL import Image

from ..errors import IngestError, NotAGifError
from ..labels import GifStatus, Label
from .client import SearchClient
from .records import DatasetManifest, GifRecord

logger = logging.getLogger(__name__)

GIF_MAGICS = (b"GIF87a", b"GIF89a")


def is_gif_payload(data: bytes) -> bool:
    return data[:6] in GIF_MAGICS


def count_gif_frames(data: bytes) -> int:
    with Image.open(io.BytesIO(data)) as im:
        return getattr(im, "n_frames", 1)


def media_relpath(sha256: str) -> str:
    return f"gifs/{sha256[:2]}/{sha256}.gif"


def _atomic_write(path: Path, data: bytes) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


class GifStore:
    """Owns the gifs/ tree under a data root. Single-writer by contract."""

    def __init__(self, data_root: Path):
        self.data_root = Path(data_root)
        self._seq = 0

    def gifs_dir(self) -> Path:
        return self.data_root / "gifs"

    def has_digest(self, sha256: str) -> bool:
        return (self.data_root / media_relpath(sha256)).exists()

    def store(self, record: GifRecord, payload: bytes) -> GifRecord:
        """Validate and persist one downloaded payload.

        Non-GIF payloads yield an excluded record with a reason in the
        sidecar; payloads whose digest is already stored are rejected as
        duplicates.
        """
        self._seq += 1
        if not is_gif_payload(payload):
            excluded = replace(record, status=GifStatus.EXCLUDED)
            self._write_sidecar(excluded, reason="not a GIF")
            return excluded
        digest = hashlib.sha256(payload).hexdigest()
        if self.has_digest(digest):
            raise IngestError(f"duplicate media for {record.id}: sha256 {digest} already stored")
        relpath = media_relpath(digest)
        _atomic_write(self.data_root / relpath, payload)
        stored = replace(
            record,
            media_path=relpath,
            sha256=digest,
            frame_count=count_gif_frames(payload),
            status=GifStatus.DOWNLOADED,
        )
        self._write_sidecar(stored)
        return stored

    def _write_sidecar(self, record: GifRecord, reason: str | None = None) -> None:
        obj = record.to_json()
        obj["fetched_seq"] = self._seq
        if reason:
            obj["exclude_reason"] = reason
        if record.sha256:
            side = (self.data_root / media_relpath(record.sha256)).with_suffix(".json")
        else:
            side = self.gifs_dir() / "excluded" / f"{record.id}.json"
        side.parent.mkdir(parents=True, exist_ok=True)
        side.write_text(json.dumps(obj, sort_keys=True) + "\n", encoding="utf-8")


def download_gif(record: GifRecord, store: GifStore, client: SearchClient) -> GifRecord:
    """Fetch one GIF's media and persist it; returns the completed record."""
    payload = client.fetch_media(record.source_url)
    stored = store.store(record, payload)
    if not is_gif_payload(payload):
        raise NotAGifError(f"{record.id}: payload is not a GIF")
    return stored


def download_all(records: list[GifRecord], store: GifStore, client: SearchClient,
                 parallelism: int = 4) -> list[GifRecord]:
    """Download media concurrently; the store is updated by this thread only."""
    done: list[GifRecord] = []
    with ThreadPoolExecutor(max_workers=max(1, parallelism)) as pool:
        futures = {pool.submit(client.fetch_media, rec.source_url): rec for rec in records}
        for fut in as_completed(futures):
            rec = futures[fut]
            try:
                payload = fut.result()
            except IngestError as exc:
                logger.warning("skipping %s: %s", rec.id, exc)
                continue
            try:
                done.append(store.store(rec, payload))
            except IngestError as exc:
                logger.info("%s", exc)
    return done


def build_manifest(data_root: Path) -> DatasetManifest:
    """Scan the store and assemble a manifest.

    Duplicate digests collapse to the earliest-stored record; corrupt
    sidecars become excluded records so nothing silently disappears.
    Idempotent: records are ordered by id, not scan order.
    """
    data_root = Path(data_root)
    gifs_dir = data_root / "gifs"
    entries: list[tuple[int, dict]] = []
    if gifs_dir.exists():
        for side in sorted(gifs_dir.rglob("*.json")):
            try:
                obj = json.loads(side.read_text(encoding="utf-8"))
                record = GifRecord.from_json(obj)
            except (ValueError, KeyError) as exc:
                logger.warning("corrupt sidecar %s excluded: %s", side, exc)
                placeholder = GifRecord(
                    id=side.stem, source_url="", tag="",
                    query_label=Label.NON_CYBERBULLYING, status=GifStatus.EXCLUDED,
                )
                entries.append((1 << 62, placeholder))
                continue
            entries.append((int(obj.get("fetched_seq", 1 << 61)), record))

    by_digest: dict[str, GifRecord] = {}
    no_digest: list[GifRecord] = []
    for _, record in sorted(entries, key=lambda item: (item[0], item[1].id)):
        if not record.sha256:
            no_digest.append(record)
        elif record.sha256 not in by_digest:
            by_digest[record.sha256] = record
    records = list(by_digest.values()) + no_digest
    records.sort(key=lambda r: r.id)
    return DatasetManifest(records=records)
