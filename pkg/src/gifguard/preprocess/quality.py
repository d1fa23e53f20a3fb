"""Sharpness scoring via variance of the Laplacian response."""

from __future__ import annotations

import numpy as np

from ..errors import PreprocessError
from .imageops import to_grayscale


def laplacian_response(gray: np.ndarray) -> np.ndarray:
    """3×3 Laplacian (center 4, edge-adjacent -1, corners 0) with replicate
    borders; same shape as the input."""
    gray = np.asarray(gray, dtype=np.float64)
    if gray.ndim != 2 or gray.size == 0:
        raise PreprocessError("laplacian expects a non-empty grayscale raster")
    padded = np.pad(gray, 1, mode="edge")
    return (
        4.0 * gray
        - padded[:-2, 1:-1]
        - padded[2:, 1:-1]
        - padded[1:-1, :-2]
        - padded[1:-1, 2:]
    )


def blur_score(image: np.ndarray) -> float:
    """Variance of the Laplacian response; 0 for constant images, larger for
    sharper content."""
    response = laplacian_response(to_grayscale(image))
    return float(np.var(response))
