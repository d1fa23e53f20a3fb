from .affine import AugmentParams, FillMode, TransformDraw, augment_frame, draw_transform
from .dataset import augment_dataset, variant_draw

__all__ = [
    "AugmentParams",
    "FillMode",
    "TransformDraw",
    "augment_dataset",
    "augment_frame",
    "draw_transform",
    "variant_draw",
]
