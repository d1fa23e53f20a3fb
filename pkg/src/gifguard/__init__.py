"""gifguard: GIF collection, human annotation, preprocessing, augmentation
and transfer-learning classification of cyberbullying content."""

__version__ = "0.1.0"

from .labels import CLASS_NAMES, CLASS_ORDER, ContentCategory, GifStatus, Label

__all__ = [
    "CLASS_NAMES",
    "CLASS_ORDER",
    "ContentCategory",
    "GifStatus",
    "Label",
    "__version__",
]
