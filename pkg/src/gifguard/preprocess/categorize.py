"""Content categorization: text-only, no-text, or face-and-text GIFs.

Detectors are pluggable ``image -> bool`` predicates. The defaults are
deliberately crude heuristics (the kind of signal cheap classical filters
give) and a manual-override table always wins, so a human pass can correct
any GIF's category without touching pixels.
"""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Callable, Iterable, Mapping

import numpy as np

from ..labels import ContentCategory
from .imageops import to_grayscale
from .quality import laplacian_response

logger = logging.getLogger(__name__)

Detector = Callable[[np.ndarray], bool]


def default_text_detector(image: np.ndarray, density_threshold: float = 0.045) -> bool:
    """Flag frames whose high-contrast edge density looks like overlay text.

    Text overlays produce dense clusters of strong horizontal gradients;
    natural content rarely exceeds the density threshold in any single
    horizontal band.
    """
    gray = to_grayscale(image)
    if gray.shape[0] < 8 or gray.shape[1] < 8:
        return False
    grad = np.abs(np.diff(gray, axis=1))
    strong = grad > 96.0
    bands = np.array_split(strong, 8, axis=0)
    density = max(float(b.mean()) for b in bands if b.size)
    return density > density_threshold


def default_face_detector(image: np.ndarray, energy_threshold: float = 40.0) -> bool:
    """Flag frames with a bright, structured central blob.

    A stand-in for a real face detector: faces in reaction GIFs are almost
    always centered, brighter than the surround, and locally textured.
    """
    gray = to_grayscale(image)
    h, w = gray.shape
    if h < 16 or w < 16:
        return False
    ch, cw = h // 4, w // 4
    center = gray[ch:-ch, cw:-cw]
    border_mean = (gray.sum() - center.sum()) / max(1, gray.size - center.size)
    texture = float(np.abs(laplacian_response(center)).mean())
    return center.mean() > border_mean * 1.1 and texture > energy_threshold


def _any_positive(frames: Iterable[np.ndarray], detector: Detector, name: str) -> bool:
    for frame in frames:
        try:
            if detector(frame):
                return True
        except Exception as exc:  # detector failure counts as a negative
            logger.warning("%s detector failed on a frame: %s", name, exc)
    return False


def categorize_content(
    frames: list[np.ndarray],
    text_detector: Detector = default_text_detector,
    face_detector: Detector = default_face_detector,
    override: ContentCategory | None = None,
) -> ContentCategory:
    """Categorize one GIF from its frames; an override replaces the result."""
    if override is not None:
        return override
    has_text = _any_positive(frames, text_detector, "text")
    has_face = _any_positive(frames, face_detector, "face")
    if has_face and has_text:
        return ContentCategory.FACE_AND_TEXT
    if has_text:
        return ContentCategory.TEXT_ONLY
    return ContentCategory.NO_TEXT


def load_overrides(path: Path) -> dict[str, ContentCategory]:
    """Read a JSON Lines override table of {gif_id, content_category}."""
    overrides: dict[str, ContentCategory] = {}
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if not line:
            continue
        obj = json.loads(line)
        overrides[obj["gif_id"]] = ContentCategory(obj["content_category"])
    return overrides


def save_overrides(overrides: Mapping[str, ContentCategory], path: Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [
        json.dumps({"gif_id": gif_id, "content_category": cat.value}, sort_keys=True)
        for gif_id, cat in sorted(overrides.items())
    ]
    path.write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")
