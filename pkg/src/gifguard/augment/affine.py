"""Randomized affine augmentation of single frames.

Each variant is produced by ONE composite warp (rotation, shear, zoom and
shift about the image center, in that order) resampled bilinearly in a
single pass, followed by an optional horizontal flip. Out-of-bounds samples
are filled per the configured fill mode. Output size always equals input
size.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

from ..errors import AugmentError

FILL_MODES = ("nearest", "reflect", "constant")


@dataclass(frozen=True)
class FillMode:
    kind: str = "nearest"
    value: float = 0.0

    def __post_init__(self):
        if self.kind not in FILL_MODES:
            raise AugmentError(f"unknown fill mode {self.kind!r}")

    @classmethod
    def parse(cls, spec: str) -> "FillMode":
        """Parse 'nearest', 'reflect', or 'constant:<value>'."""
        if spec.startswith("constant"):
            _, _, raw = spec.partition(":")
            return cls("constant", float(raw) if raw else 0.0)
        return cls(spec)


@dataclass
class AugmentParams:
    rotation_deg: float = 20.0
    width_shift_frac: float = 0.1
    height_shift_frac: float = 0.1
    shear_deg: float = 10.0
    zoom_frac: float = 0.1
    horizontal_flip: bool = True
    fill_mode: FillMode = field(default_factory=FillMode)
    factor: int = 4
    seed: int = 0

    def __post_init__(self):
        if self.factor < 1:
            raise AugmentError("factor must be >= 1")
        if self.rotation_deg < 0 or self.shear_deg < 0:
            raise AugmentError("angle ranges must be >= 0")
        for name in ("width_shift_frac", "height_shift_frac", "zoom_frac"):
            v = getattr(self, name)
            if not 0.0 <= v < 1.0:
                raise AugmentError(f"{name} must lie in [0, 1)")


@dataclass(frozen=True)
class TransformDraw:
    """One realized set of augmentation values."""

    rotation_deg: float = 0.0
    shift_w_frac: float = 0.0
    shift_h_frac: float = 0.0
    shear_deg: float = 0.0
    zoom: float = 1.0
    flip: bool = False

    def is_identity(self) -> bool:
        return (
            self.rotation_deg == 0.0
            and self.shift_w_frac == 0.0
            and self.shift_h_frac == 0.0
            and self.shear_deg == 0.0
            and self.zoom == 1.0
            and not self.flip
        )

    def to_json(self) -> dict:
        return {
            "rotation_deg": self.rotation_deg,
            "shift_w_frac": self.shift_w_frac,
            "shift_h_frac": self.shift_h_frac,
            "shear_deg": self.shear_deg,
            "zoom": self.zoom,
            "flip": self.flip,
        }


def draw_transform(params: AugmentParams, rng: np.random.Generator) -> TransformDraw:
    """Sample one draw: angles and shifts uniform on symmetric ranges, zoom
    uniform on [1-z, 1+z], flip a fair coin when enabled."""
    return TransformDraw(
        rotation_deg=float(rng.uniform(-params.rotation_deg, params.rotation_deg)),
        shift_w_frac=float(rng.uniform(-params.width_shift_frac, params.width_shift_frac)),
        shift_h_frac=float(rng.uniform(-params.height_shift_frac, params.height_shift_frac)),
        shear_deg=float(rng.uniform(-params.shear_deg, params.shear_deg)),
        zoom=float(rng.uniform(1.0 - params.zoom_frac, 1.0 + params.zoom_frac)),
        flip=bool(rng.random() < 0.5) if params.horizontal_flip else False,
    )


def _content_matrix(draw: TransformDraw) -> np.ndarray:
    """Linear part of the content transform in (row, col) coordinates:
    rotation @ shear @ zoom."""
    theta = math.radians(draw.rotation_deg)
    shear = math.radians(draw.shear_deg)
    rot = np.array([[math.cos(theta), -math.sin(theta)],
                    [math.sin(theta), math.cos(theta)]])
    shr = np.array([[1.0, 0.0], [math.tan(shear), 1.0]])
    zoom = np.diag([draw.zoom, draw.zoom])
    return rot @ shr @ zoom


def augment_frame(image: np.ndarray, draw: TransformDraw,
                  fill_mode: FillMode = FillMode()) -> np.ndarray:
    """Apply one draw to an image; identity draws return the pixels exactly.

    The warp maps content as out = C + L(in - C) + t with C the image
    center ((H-1)/2, (W-1)/2) and t the shift in pixels, so resampling pulls
    each output pixel from in = C + L^-1(out - C - t).
    """
    arr = np.asarray(image)
    if arr.ndim not in (2, 3) or arr.size == 0:
        raise AugmentError(f"expected a non-empty raster, got shape {arr.shape}")
    out = arr.astype(np.float64, copy=True)
    warp_needed = not (
        draw.rotation_deg == 0.0 and draw.shear_deg == 0.0 and draw.zoom == 1.0
        and draw.shift_h_frac == 0.0 and draw.shift_w_frac == 0.0
    )
    if warp_needed:
        h, w = arr.shape[:2]
        center = np.array([(h - 1) / 2.0, (w - 1) / 2.0])
        shift = np.array([draw.shift_h_frac * h, draw.shift_w_frac * w])
        inv = np.linalg.inv(_content_matrix(draw))
        offset = center - inv @ (center + shift)

        def warp(plane: np.ndarray) -> np.ndarray:
            return ndimage.affine_transform(
                plane, inv, offset=offset, order=1, mode=fill_mode.kind, cval=fill_mode.value
            )

        if arr.ndim == 2:
            out = warp(out)
        else:
            out = np.stack([warp(out[:, :, c]) for c in range(arr.shape[2])], axis=-1)
    if draw.flip:
        out = out[:, ::-1].copy()
    if np.issubdtype(arr.dtype, np.integer):
        return np.clip(np.rint(out), 0, 255).astype(arr.dtype)
    return out.astype(arr.dtype)
