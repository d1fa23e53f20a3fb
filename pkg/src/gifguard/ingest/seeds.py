"""Hashtag seed file parsing.

Format: UTF-8 text, one ``<tag>,<label>`` per line, ``#`` comments and blank
lines ignored. The label is ``cyberbullying`` or ``non_cyberbullying``.
"""

from __future__ import annotations

from pathlib import Path

from ..errors import IngestError
from ..labels import Label
from .records import HashtagSeed


def parse_seed_line(line: str) -> HashtagSeed:
    parts = [p.strip() for p in line.split(",")]
    if len(parts) != 2:
        raise IngestError(f"malformed seed line: {line!r}")
    tag, label = parts
    try:
        return HashtagSeed(tag=tag, query_label=Label(label))
    except ValueError:
        raise IngestError(f"unknown label {label!r} in seed line: {line!r}") from None


def load_seed_file(path: Path) -> list[HashtagSeed]:
    seeds = []
    for raw in Path(path).read_text(encoding="utf-8").splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        seeds.append(parse_seed_line(line))
    if not seeds:
        raise IngestError(f"seed file {path} contains no seeds")
    return seeds
