#!/usr/bin/env python3
"""Convert torchvision VGG16 ImageNet weights to the backbone .npz layout.

Needs network access (or a pre-downloaded torchvision checkpoint) — run it
once on a connected machine and ship the .npz:

    python scripts/convert_torchvision_weights.py weights/vgg16.npz
"""

import argparse
from pathlib import Path

import numpy as np

from gifguard.model import save_backbone_weights, validate_backbone_weights
from gifguard.model.vgg import conv_shapes, file_sha256


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("out", type=Path, help="output .npz path")
    parser.add_argument("--checkpoint", type=Path, default=None,
                        help="already-downloaded torchvision vgg16 state dict (.pth)")
    args = parser.parse_args()

    if args.checkpoint:
        import torch

        state = torch.load(args.checkpoint, map_location="cpu", weights_only=True)
    else:
        from torchvision.models import VGG16_Weights, vgg16

        state = vgg16(weights=VGG16_Weights.IMAGENET1K_V1).state_dict()

    # torchvision's features are indexed 0,2,5,7,... in conv order; map them
    # onto the named conv layers block by block.
    conv_indices = [0, 2, 5, 7, 10, 12, 14, 17, 19, 21, 24, 26, 28]
    weights = {}
    for name, idx in zip(conv_shapes(), conv_indices):
        weights[f"{name}.weight"] = np.asarray(state[f"features.{idx}.weight"],
                                               dtype=np.float32)
        weights[f"{name}.bias"] = np.asarray(state[f"features.{idx}.bias"],
                                             dtype=np.float32)
    validate_backbone_weights(weights)
    save_backbone_weights(weights, args.out)
    print(f"wrote {args.out} (sha256 {file_sha256(args.out)})")


if __name__ == "__main__":
    main()
