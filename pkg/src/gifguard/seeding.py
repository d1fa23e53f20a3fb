"""Deterministic seed derivation.

Python's builtin ``hash`` is salted per process, so sub-seeds for folds,
frames and augmentation variants are derived from a SHA-256 of the parent
seed plus a context path. The same (seed, *parts) always yields the same
sub-seed on every platform and run.
"""

from __future__ import annotations

import hashlib


def derive_seed(seed: int, *parts: object) -> int:
    """Derive a 63-bit sub-seed from a parent seed and context parts."""
    payload = repr((int(seed),) + tuple(str(p) for p in parts)).encode("utf-8")
    digest = hashlib.sha256(payload).digest()
    return int.from_bytes(digest[:8], "big") >> 1
