from .classifier import (
    ClassifierSpec,
    GifClassifier,
    Prediction,
    build_classifier,
    count_trainable_params,
    global_average_pool,
    init_head,
    predict_frame,
    predict_gif,
    save_model_sidecar,
    stable_softmax,
)
from .gradcheck import head_gradient_check
from .vgg import (
    VGG16_BLOCKS,
    build_feature_stack,
    conv_shapes,
    file_sha256,
    load_backbone_weights,
    random_backbone_weights,
    save_backbone_weights,
    validate_backbone_weights,
)

__all__ = [
    "ClassifierSpec",
    "GifClassifier",
    "Prediction",
    "VGG16_BLOCKS",
    "build_classifier",
    "build_feature_stack",
    "conv_shapes",
    "count_trainable_params",
    "file_sha256",
    "global_average_pool",
    "head_gradient_check",
    "init_head",
    "load_backbone_weights",
    "predict_frame",
    "predict_gif",
    "random_backbone_weights",
    "save_backbone_weights",
    "save_model_sidecar",
    "stable_softmax",
    "validate_backbone_weights",
]
