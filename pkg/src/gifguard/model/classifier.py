"""Transfer-learning classifier: frozen convolutional backbone, global
average pooling, a 256-unit ReLU layer, and a softmax output.

The pretrained feature stack is kept; the original classifier layers are
discarded entirely and replaced by the small trainable head. With the base
frozen the head has 512*H + H + H*K + K trainable parameters (131,842 for
H=256, K=2).
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np
import torch
from torch import nn

from ..errors import ModelError
from ..seeding import derive_seed
from .vgg import (
    FEATURE_CHANNELS,
    apply_backbone_weights,
    build_feature_stack,
    file_sha256,
    load_backbone_weights,
)

SUPPORTED_BACKBONES = ("vgg16_imagenet",)


@dataclass
class ClassifierSpec:
    backbone: str = "vgg16_imagenet"
    freeze_base: bool = True
    head_units: int = 256
    num_classes: int = 2
    input_side: int = 224

    def __post_init__(self):
        if self.backbone not in SUPPORTED_BACKBONES:
            raise ModelError(f"unsupported backbone {self.backbone!r}")
        if self.num_classes < 2:
            raise ModelError("num_classes must be >= 2")
        if self.head_units < 1:
            raise ModelError("head_units must be >= 1")
        if self.input_side < 32 or self.input_side % 32 != 0:
            raise ModelError("input_side must be a positive multiple of 32")


@dataclass
class Prediction:
    probabilities: np.ndarray
    predicted_class: int

    @classmethod
    def from_probabilities(cls, probs: np.ndarray) -> "Prediction":
        probs = np.asarray(probs, dtype=np.float64)
        if probs.ndim != 1 or probs.size < 2:
            raise ModelError(f"probability vector has bad shape {probs.shape}")
        if (probs < 0).any() or abs(float(probs.sum()) - 1.0) > 1e-6:
            raise ModelError("probabilities must be non-negative and sum to 1")
        return cls(probabilities=probs, predicted_class=int(np.argmax(probs)))


def stable_softmax(logits: np.ndarray) -> np.ndarray:
    """Softmax along the last axis, shift-stabilized for huge logits."""
    arr = np.asarray(logits, dtype=np.float64)
    shifted = arr - arr.max(axis=-1, keepdims=True)
    exp = np.exp(shifted)
    return exp / exp.sum(axis=-1, keepdims=True)


def global_average_pool(feature_map: torch.Tensor) -> torch.Tensor:
    """Mean over the spatial axes of an N×C×H×W map -> N×C.

    Accumulated in float64 so a channel of constant value c pools to
    exactly c (float32 accumulation rounds at typical spatial sizes).
    """
    pooled = feature_map.double().mean(dim=(2, 3))
    return pooled.to(feature_map.dtype)


class GifClassifier(nn.Module):
    def __init__(self, spec: ClassifierSpec):
        super().__init__()
        self.spec = spec
        self.features = build_feature_stack()
        self.fc1 = nn.Linear(FEATURE_CHANNELS, spec.head_units)
        self.relu = nn.ReLU()
        self.fc2 = nn.Linear(spec.head_units, spec.num_classes)

    def forward_features(self, x: torch.Tensor) -> torch.Tensor:
        return global_average_pool(self.features(x))

    def head_logits(self, pooled: torch.Tensor) -> torch.Tensor:
        return self.fc2(self.relu(self.fc1(pooled)))

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        return self.head_logits(self.forward_features(x))

    def head_parameters(self):
        return list(self.fc1.parameters()) + list(self.fc2.parameters())

    def head_state(self) -> dict:
        return {
            "fc1.weight": self.fc1.weight.detach().clone(),
            "fc1.bias": self.fc1.bias.detach().clone(),
            "fc2.weight": self.fc2.weight.detach().clone(),
            "fc2.bias": self.fc2.bias.detach().clone(),
        }

    def load_head_state(self, state: dict) -> None:
        with torch.no_grad():
            self.fc1.weight.copy_(state["fc1.weight"])
            self.fc1.bias.copy_(state["fc1.bias"])
            self.fc2.weight.copy_(state["fc2.weight"])
            self.fc2.bias.copy_(state["fc2.bias"])


def init_head(model: GifClassifier, seed: int) -> None:
    """Uniform fan-in-scaled head init (U(-1/sqrt(fan_in), +1/sqrt(fan_in))),
    zero biases, fully seeded."""
    gen = torch.Generator().manual_seed(derive_seed(seed, "head-init"))
    with torch.no_grad():
        for linear in (model.fc1, model.fc2):
            bound = 1.0 / float(linear.in_features) ** 0.5
            linear.weight.uniform_(-bound, bound, generator=gen)
            linear.bias.zero_()


def build_classifier(spec: ClassifierSpec, weights_source: Path | dict,
                     head_seed: int = 0) -> GifClassifier:
    """Assemble the classifier from a backbone weights file (or an already
    loaded weights dict) and a freshly initialized head."""
    if isinstance(weights_source, (str, Path)):
        weights = load_backbone_weights(Path(weights_source))
    else:
        weights = weights_source
    model = GifClassifier(spec)
    apply_backbone_weights(model.features, weights)
    if spec.freeze_base:
        for param in model.features.parameters():
            param.requires_grad_(False)
    init_head(model, head_seed)
    model.eval()
    return model


def count_trainable_params(model: nn.Module) -> int:
    return sum(p.numel() for p in model.parameters() if p.requires_grad)


def _to_batch(images: np.ndarray, input_side: int) -> torch.Tensor:
    arr = np.asarray(images, dtype=np.float32)
    if arr.ndim == 3:
        arr = arr[None]
    if arr.ndim != 4 or arr.shape[1:] != (input_side, input_side, 3):
        raise ModelError(
            f"expected images shaped ({input_side}, {input_side}, 3), got {arr.shape[1:]}"
        )
    return torch.from_numpy(np.ascontiguousarray(arr.transpose(0, 3, 1, 2)))


def predict_frame(model: GifClassifier, image: np.ndarray) -> Prediction:
    """Class probabilities for one preprocessed frame in [0, 1]."""
    batch = _to_batch(image, model.spec.input_side)
    with torch.no_grad():
        logits = model(batch).numpy()[0]
    return Prediction.from_probabilities(stable_softmax(logits))


def predict_gif(model: GifClassifier, frames: list[np.ndarray]) -> Prediction:
    """GIF-level prediction: arithmetic mean of per-frame probabilities."""
    if not frames:
        raise ModelError("cannot predict a GIF with no frames")
    probs = np.stack([predict_frame(model, f).probabilities for f in frames])
    return Prediction.from_probabilities(probs.mean(axis=0))


def save_model_sidecar(spec: ClassifierSpec, seed: int, weights_path: Path | None,
                       out_path: Path) -> None:
    obj = {
        "spec": asdict(spec),
        "seed": seed,
        "weights_sha256": file_sha256(weights_path) if weights_path else None,
    }
    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    out_path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n", encoding="utf-8")
