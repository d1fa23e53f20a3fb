"""16-layer VGG-style convolutional backbone.

The feature stack is the classic 13-conv/5-pool configuration producing a
512-channel map at 1/32 of the input side (7×7 for 224 input). Weights are
exchanged as ``.npz`` files keyed ``conv<block>_<n>.weight`` /
``conv<block>_<n>.bias``; loading validates every shape before anything
touches the network so a bad file fails fast, naming the offending layer.
"""

from __future__ import annotations

import hashlib
from collections import OrderedDict
from pathlib import Path

import numpy as np
import torch
from torch import nn

from ..errors import ShapeMismatchError, WeightsFileError

# (name, out_channels) per conv layer, pools between blocks.
VGG16_BLOCKS: list[list[tuple[str, int]]] = [
    [("conv1_1", 64), ("conv1_2", 64)],
    [("conv2_1", 128), ("conv2_2", 128)],
    [("conv3_1", 256), ("conv3_2", 256), ("conv3_3", 256)],
    [("conv4_1", 512), ("conv4_2", 512), ("conv4_3", 512)],
    [("conv5_1", 512), ("conv5_2", 512), ("conv5_3", 512)],
]
FEATURE_CHANNELS = 512


def conv_shapes() -> "OrderedDict[str, tuple[tuple[int, ...], tuple[int, ...]]]":
    """Expected (weight, bias) shapes per conv layer name."""
    shapes: OrderedDict[str, tuple[tuple[int, ...], tuple[int, ...]]] = OrderedDict()
    in_ch = 3
    for block in VGG16_BLOCKS:
        for name, out_ch in block:
            shapes[name] = ((out_ch, in_ch, 3, 3), (out_ch,))
            in_ch = out_ch
    return shapes


def build_feature_stack() -> nn.Sequential:
    layers: OrderedDict[str, nn.Module] = OrderedDict()
    in_ch = 3
    for b, block in enumerate(VGG16_BLOCKS, start=1):
        for name, out_ch in block:
            layers[name] = nn.Conv2d(in_ch, out_ch, kernel_size=3, padding=1)
            layers[f"relu{name[4:]}"] = nn.ReLU(inplace=True)
            in_ch = out_ch
        layers[f"pool{b}"] = nn.MaxPool2d(kernel_size=2, stride=2)
    return nn.Sequential(layers)


def random_backbone_weights(seed: int) -> dict[str, np.ndarray]:
    """He-initialized random weights, e.g. for tests and synthetic smoke runs
    where the real pretrained file is unavailable."""
    rng = np.random.default_rng(seed)
    out: dict[str, np.ndarray] = {}
    for name, (w_shape, b_shape) in conv_shapes().items():
        fan_in = w_shape[1] * w_shape[2] * w_shape[3]
        std = np.sqrt(2.0 / fan_in)
        out[f"{name}.weight"] = rng.normal(0.0, std, size=w_shape).astype(np.float32)
        out[f"{name}.bias"] = np.zeros(b_shape, dtype=np.float32)
    return out


def save_backbone_weights(weights: dict[str, np.ndarray], path: Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    np.savez(path, **weights)


def load_backbone_weights(path: Path) -> dict[str, np.ndarray]:
    path = Path(path)
    if not path.exists():
        raise WeightsFileError(f"backbone weights file not found: {path}")
    try:
        with np.load(path) as npz:
            weights = {k: np.asarray(npz[k]) for k in npz.files}
    except (OSError, ValueError) as exc:
        raise WeightsFileError(f"cannot read backbone weights {path}: {exc}") from exc
    validate_backbone_weights(weights)
    return weights


def validate_backbone_weights(weights: dict[str, np.ndarray]) -> None:
    for name, (w_shape, b_shape) in conv_shapes().items():
        for suffix, expected in (("weight", w_shape), ("bias", b_shape)):
            key = f"{name}.{suffix}"
            if key not in weights:
                raise WeightsFileError(f"backbone weights missing {key}")
            actual = tuple(weights[key].shape)
            if actual != expected:
                raise ShapeMismatchError(
                    f"layer {key}: expected shape {expected}, file has {actual}"
                )


def apply_backbone_weights(features: nn.Sequential, weights: dict[str, np.ndarray]) -> None:
    validate_backbone_weights(weights)
    with torch.no_grad():
        for name, module in features.named_children():
            if isinstance(module, nn.Conv2d):
                module.weight.copy_(torch.from_numpy(
                    np.ascontiguousarray(weights[f"{name}.weight"], dtype=np.float32)))
                module.bias.copy_(torch.from_numpy(
                    np.ascontiguousarray(weights[f"{name}.bias"], dtype=np.float32)))


def file_sha256(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()
