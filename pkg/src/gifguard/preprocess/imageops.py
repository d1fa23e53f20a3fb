"""Low-level raster operations used across preprocessing.

All functions take H×W or H×W×3 numpy arrays. They are implemented directly
(no OpenCV/PIL resampling) so their numerics are pinned down and testable
against independent references.
"""

from __future__ import annotations

import numpy as np

from ..errors import PreprocessError

# Rec.601 luma coefficients.
_LUMA = np.array([0.299, 0.587, 0.114])


def to_grayscale(image: np.ndarray) -> np.ndarray:
    """Luma grayscale as float64; grayscale inputs pass through."""
    arr = np.asarray(image, dtype=np.float64)
    if arr.ndim == 2:
        return arr
    if arr.ndim == 3 and arr.shape[2] == 3:
        return arr @ _LUMA
    raise PreprocessError(f"expected H×W or H×W×3 raster, got shape {arr.shape}")


def _overlap_matrix(n_in: int, n_out: int) -> np.ndarray:
    """Row-stochastic matrix averaging n_in cells into n_out cells by exact
    interval overlap (area averaging)."""
    scale = n_in / n_out
    mat = np.zeros((n_out, n_in))
    for o in range(n_out):
        lo, hi = o * scale, (o + 1) * scale
        first, last = int(np.floor(lo)), int(np.ceil(hi))
        for i in range(first, min(last, n_in)):
            mat[o, i] = min(hi, i + 1) - max(lo, i)
    return mat / scale


def area_downscale(gray: np.ndarray, out_h: int, out_w: int) -> np.ndarray:
    """Box (area-average) downscale of a grayscale image."""
    gray = np.asarray(gray, dtype=np.float64)
    if gray.size == 0:
        raise PreprocessError("cannot downscale an empty raster")
    rows = _overlap_matrix(gray.shape[0], out_h)
    cols = _overlap_matrix(gray.shape[1], out_w)
    return rows @ gray @ cols.T


def bilinear_resize(image: np.ndarray, out_h: int, out_w: int) -> np.ndarray:
    """Plain bilinear resampling with the half-pixel coordinate convention
    (output pixel p samples input at (p + 0.5) * in/out - 0.5)."""
    arr = np.asarray(image, dtype=np.float64)
    squeeze = False
    if arr.ndim == 2:
        arr = arr[:, :, None]
        squeeze = True
    in_h, in_w = arr.shape[:2]

    def _coords(n_out: int, n_in: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        pos = (np.arange(n_out) + 0.5) * (n_in / n_out) - 0.5
        lo = np.floor(pos).astype(int)
        frac = pos - lo
        lo = np.clip(lo, 0, n_in - 1)
        hi = np.clip(lo + 1, 0, n_in - 1)
        return lo, hi, frac

    r0, r1, rf = _coords(out_h, in_h)
    c0, c1, cf = _coords(out_w, in_w)
    rf = rf[:, None, None]
    cf = cf[None, :, None]
    top = arr[r0][:, c0] * (1 - cf) + arr[r0][:, c1] * cf
    bot = arr[r1][:, c0] * (1 - cf) + arr[r1][:, c1] * cf
    out = top * (1 - rf) + bot * rf
    return out[:, :, 0] if squeeze else out


def resize_normalize(image: np.ndarray, target_side: int) -> np.ndarray:
    """Bilinear resize to a square (aspect ratio not preserved) and scale
    8-bit values into [0, 1]."""
    if target_side < 1:
        raise PreprocessError("target_side must be >= 1")
    arr = np.asarray(image, dtype=np.float64)
    if arr.ndim == 2:
        arr = np.stack([arr] * 3, axis=-1)
    if arr.shape[:2] != (target_side, target_side):
        arr = bilinear_resize(arr, target_side, target_side)
    return (arr / 255.0).astype(np.float32)
