"""Exception hierarchy shared across the pipeline.

Every domain failure raises a ``GifGuardError`` subclass so the CLI can map
them to exit code 1 while genuine usage mistakes stay exit code 2.
"""

from __future__ import annotations


class GifGuardError(Exception):
    """Base class for all domain errors raised by this package."""


class IngestError(GifGuardError):
    pass


class AuthRejectedError(IngestError):
    """The search API rejected the supplied key."""


class RateLimitedError(IngestError):
    """The search API asked us to back off."""

    def __init__(self, message: str, retry_after: float | None = None):
        super().__init__(message)
        self.retry_after = retry_after


class TransientNetworkError(IngestError):
    """Retryable network-level failure."""


class NotAGifError(IngestError):
    """Downloaded payload does not start with a GIF signature."""


class AnnotationError(GifGuardError):
    pass


class UnknownAnnotatorError(AnnotationError):
    code = "unknown_annotator"


class UnknownGifError(AnnotationError):
    code = "unknown_gif"


class CriteriaRequiredError(AnnotationError):
    code = "criteria_required"


class NotServedError(AnnotationError):
    code = "not_served"


class EmptyOverlapError(AnnotationError):
    code = "empty_overlap"


class UnresolvedLabelsError(AnnotationError):
    """Raised by finalization when GIFs lack both unanimity and adjudication."""

    def __init__(self, gif_ids):
        self.gif_ids = list(gif_ids)
        super().__init__(
            "no final label derivable for: " + ", ".join(self.gif_ids)
        )


class PreprocessError(GifGuardError):
    pass


class GifDecodeError(PreprocessError):
    pass


class EmptyDatasetError(PreprocessError):
    pass


class AugmentError(GifGuardError):
    pass


class SplitLeakageError(AugmentError):
    """Non-training frames were passed to the augmenter without paper_mode."""


class ModelError(GifGuardError):
    pass


class WeightsFileError(ModelError):
    pass


class ShapeMismatchError(ModelError):
    pass


class TrainError(GifGuardError):
    pass


class SplitError(TrainError):
    pass


class DivergenceError(TrainError):
    def __init__(self, epoch: int, value: float):
        self.epoch = epoch
        self.value = value
        super().__init__(f"monitored loss became non-finite at epoch {epoch}: {value}")


class MetricsError(GifGuardError):
    pass


class StageError(GifGuardError):
    """A pipeline stage was invoked before its inputs exist."""
