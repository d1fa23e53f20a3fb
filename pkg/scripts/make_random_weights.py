#!/usr/bin/env python3
"""Generate a seeded, He-initialized backbone weights file.

Useful for tests, smoke runs, and environments without the pretrained
ImageNet weights. Real transfer learning needs a converted pretrained file
instead (see the README).
"""

import argparse
from pathlib import Path

from gifguard.model import random_backbone_weights, save_backbone_weights
from gifguard.model.vgg import file_sha256


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("out", type=Path, help="output .npz path")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()
    save_backbone_weights(random_backbone_weights(args.seed), args.out)
    print(f"wrote {args.out} (seed {args.seed}, sha256 {file_sha256(args.out)})")


if __name__ == "__main__":
    main()
