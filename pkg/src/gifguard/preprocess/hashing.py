"""Difference-hash (dHash) perceptual fingerprints for near-duplicate frames.

The hash compares horizontally adjacent cells of an area-averaged
``rows × (rows+1)`` grid: bit = 1 iff the left cell is darker than its right
neighbour, row-major from the most significant bit. Identical structure
yields identical hashes; near-duplicates land within a small Hamming ball.
"""

from __future__ import annotations

import math

import numpy as np

from ..errors import PreprocessError
from .imageops import area_downscale, to_grayscale


def _grid_shape(hash_bits: int) -> tuple[int, int]:
    rows = math.isqrt(hash_bits)
    if rows * rows != hash_bits:
        raise PreprocessError(f"hash_bits must be a perfect square, got {hash_bits}")
    return rows, rows + 1


def perceptual_hash(image: np.ndarray, hash_bits: int = 64) -> int:
    """dHash of an image as an integer with ``hash_bits`` bits."""
    rows, cols = _grid_shape(hash_bits)
    gray = to_grayscale(image)
    if gray.size == 0:
        raise PreprocessError("cannot hash an empty raster")
    # Quantize away area-averaging float noise so exactly-equal neighbours
    # (constant regions) never produce spurious bits.
    grid = np.round(area_downscale(gray, rows, cols), 9)
    bits = grid[:, :-1] < grid[:, 1:]
    value = 0
    for bit in bits.ravel():
        value = (value << 1) | int(bit)
    return value


def hamming_distance(a: int, b: int) -> int:
    return (a ^ b).bit_count()
