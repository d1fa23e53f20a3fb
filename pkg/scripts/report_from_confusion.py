#!/usr/bin/env python3
"""Render a full classification report from raw confusion-matrix counts.

    python scripts/report_from_confusion.py 934 17 40 697
"""

import argparse

import numpy as np

from gifguard.labels import CLASS_NAMES
from gifguard.metrics import ConfusionMatrix, classification_report


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("counts", type=int, nargs=4,
                        metavar=("TP", "FN", "FP", "TN"),
                        help="row-major 2x2 counts (true class = row)")
    args = parser.parse_args()
    matrix = ConfusionMatrix(np.array(args.counts).reshape(2, 2), CLASS_NAMES)
    print(classification_report(matrix).to_text())


if __name__ == "__main__":
    main()
