from .categorize import (
    categorize_content,
    default_face_detector,
    default_text_detector,
    load_overrides,
    save_overrides,
)
from .dataset import (
    DatasetSummary,
    FrameIndexEntry,
    build_frame_dataset,
    load_frame_image,
    load_index,
    save_frame_image,
    save_index,
    summarize,
)
from .frames import (
    FrameSample,
    PreprocessConfig,
    Provenance,
    Split,
    dedup_frames,
    extract_frames,
    sample_indices,
)
from .gifio import decode_gif, encode_gif, write_gif
from .hashing import hamming_distance, perceptual_hash
from .imageops import area_downscale, bilinear_resize, resize_normalize, to_grayscale
from .quality import blur_score, laplacian_response

__all__ = [
    "DatasetSummary",
    "FrameIndexEntry",
    "FrameSample",
    "PreprocessConfig",
    "Provenance",
    "Split",
    "area_downscale",
    "bilinear_resize",
    "blur_score",
    "build_frame_dataset",
    "categorize_content",
    "decode_gif",
    "dedup_frames",
    "default_face_detector",
    "default_text_detector",
    "encode_gif",
    "extract_frames",
    "hamming_distance",
    "laplacian_response",
    "load_frame_image",
    "load_index",
    "load_overrides",
    "perceptual_hash",
    "resize_normalize",
    "sample_indices",
    "save_frame_image",
    "save_index",
    "save_overrides",
    "summarize",
    "to_grayscale",
    "write_gif",
]
