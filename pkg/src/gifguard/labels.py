"""Label vocabulary shared by every pipeline stage."""

from __future__ import annotations

import enum


class Label(str, enum.Enum):
    CYBERBULLYING = "cyberbullying"
    NON_CYBERBULLYING = "non_cyberbullying"


# Fixed class order used by reports and confusion matrices.
CLASS_ORDER = [Label.CYBERBULLYING, Label.NON_CYBERBULLYING]
CLASS_NAMES = [label.value for label in CLASS_ORDER]


class ContentCategory(str, enum.Enum):
    TEXT_ONLY = "text_only"
    NO_TEXT = "no_text"
    FACE_AND_TEXT = "face_and_text"
    UNKNOWN = "unknown"


class GifStatus(str, enum.Enum):
    DOWNLOADED = "downloaded"
    ANNOTATED = "annotated"
    CLEANED = "cleaned"
    EXCLUDED = "excluded"
