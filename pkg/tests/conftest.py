import json
from pathlib import Path

import numpy as np
import pytest

from gifguard.ingest.records import DatasetManifest, GifRecord
from gifguard.labels import Label
from gifguard.preprocess.gifio import encode_gif


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def random_frames(rng, n, side=24):
    return [rng.integers(0, 256, (side, side, 3)).astype(np.uint8) for _ in range(n)]


def gif_bytes(rng, n_frames=3, side=24):
    return encode_gif(random_frames(rng, n_frames, side))


@pytest.fixture
def make_gif(rng):
    def _make(n_frames=3, side=24):
        return gif_bytes(rng, n_frames, side)

    return _make


def make_manifest(n=4, label=Label.NON_CYBERBULLYING):
    records = [
        GifRecord(id=f"g{i}", source_url=f"u{i}", tag="t", query_label=label)
        for i in range(n)
    ]
    return DatasetManifest(records=records)


def write_search_fixture(root: Path, tag: str, pages: list[list[dict]]):
    """Write paged search responses the FixtureTransport understands."""
    total = sum(len(p) for p in pages)
    offset = 0
    search_dir = root / "search" / tag
    search_dir.mkdir(parents=True, exist_ok=True)
    for page in pages:
        payload = {
            "data": page,
            "pagination": {"count": len(page), "offset": offset, "total_count": total},
        }
        (search_dir / f"offset_{offset}.json").write_text(json.dumps(payload))
        offset += len(page)
