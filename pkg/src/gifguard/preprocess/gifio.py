"""GIF decoding and encoding helpers.

Decoding composites every frame to RGB: Pillow resolves GIF disposal and
transparency while seeking, so each returned array is the full canvas as a
viewer would show it.
"""

from __future__ import annotations

import io
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from ..errors import GifDecodeError


def decode_gif(data: bytes, name: str = "<bytes>") -> list[np.ndarray]:
    """Decode all frames of a GIF to H×W×3 uint8 arrays."""
    try:
        im = Image.open(io.BytesIO(data))
    except UnidentifiedImageError as exc:
        raise GifDecodeError(f"cannot decode {name}: {exc}") from exc
    frames: list[np.ndarray] = []
    try:
        n = getattr(im, "n_frames", 1)
        for idx in range(n):
            im.seek(idx)
            frames.append(np.asarray(im.convert("RGB"), dtype=np.uint8))
    except (OSError, SyntaxError, ValueError) as exc:
        if not frames:
            raise GifDecodeError(f"cannot decode {name}: {exc}") from exc
    if not frames:
        raise GifDecodeError(f"{name} has no decodable frames")
    return frames


def encode_gif(frames: list[np.ndarray], duration_ms: int = 80) -> bytes:
    """Encode uint8 RGB frames as an animated GIF."""
    if not frames:
        raise GifDecodeError("cannot encode an empty frame list")
    images = [Image.fromarray(np.asarray(f, dtype=np.uint8), "RGB") for f in frames]
    buf = io.BytesIO()
    images[0].save(
        buf,
        format="GIF",
        save_all=True,
        append_images=images[1:],
        duration=duration_ms,
        loop=0,
        disposal=1,
    )
    return buf.getvalue()


def write_gif(path: Path, frames: list[np.ndarray], duration_ms: int = 80) -> bytes:
    data = encode_gif(frames, duration_ms)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(data)
    return data
