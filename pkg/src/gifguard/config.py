"""Declarative pipeline configuration.

One YAML file configures every stage; CLI flags override the few common
fields (data root, run dir, seed). Unknown keys fail loudly rather than
being silently dropped.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields
from pathlib import Path

import yaml

from .augment.affine import AugmentParams, FillMode
from .errors import GifGuardError
from .model.classifier import ClassifierSpec
from .preprocess.frames import PreprocessConfig
from .train.config import TrainConfig


@dataclass
class PipelineConfig:
    data_root: Path = Path("data")
    run_dir: Path = Path("runs/default")
    seed_file: Path | None = None
    weights: Path | None = None
    seed: int = 0
    preprocess: PreprocessConfig = field(default_factory=PreprocessConfig)
    augment: AugmentParams = field(default_factory=AugmentParams)
    classifier: ClassifierSpec = field(default_factory=ClassifierSpec)
    train: TrainConfig = field(default_factory=TrainConfig)

    def __post_init__(self):
        self.data_root = Path(self.data_root)
        self.run_dir = Path(self.run_dir)
        if self.seed_file is not None:
            self.seed_file = Path(self.seed_file)
        if self.weights is not None:
            self.weights = Path(self.weights)
        # One seed drives every stage unless a section pins its own.
        if self.augment.seed == 0:
            self.augment.seed = self.seed
        if self.train.seed == 0:
            self.train.seed = self.seed


def _build_section(cls, obj: dict, section: str):
    if not isinstance(obj, dict):
        raise GifGuardError(f"config section {section!r} must be a mapping")
    known = {f.name for f in fields(cls)}
    unknown = set(obj) - known
    if unknown:
        raise GifGuardError(f"unknown keys in config section {section!r}: {sorted(unknown)}")
    if cls is AugmentParams and isinstance(obj.get("fill_mode"), str):
        obj = {**obj, "fill_mode": FillMode.parse(obj["fill_mode"])}
    if cls is TrainConfig and "split_ratios" in obj:
        obj = {**obj, "split_ratios": tuple(obj["split_ratios"])}
    return cls(**obj)


def load_config(path: Path | None = None, overrides: dict | None = None) -> PipelineConfig:
    raw: dict = {}
    if path is not None:
        loaded = yaml.safe_load(Path(path).read_text(encoding="utf-8"))
        if loaded is None:
            loaded = {}
        if not isinstance(loaded, dict):
            raise GifGuardError(f"config file {path} must contain a mapping")
        raw = loaded
    for key, value in (overrides or {}).items():
        if value is not None:
            raw[key] = value

    sections = {
        "preprocess": PreprocessConfig,
        "augment": AugmentParams,
        "classifier": ClassifierSpec,
        "train": TrainConfig,
    }
    kwargs: dict = {}
    for key, value in raw.items():
        if key in sections:
            kwargs[key] = _build_section(sections[key], dict(value), key)
        elif key in ("data_root", "run_dir", "seed_file", "weights", "seed"):
            kwargs[key] = value
        else:
            raise GifGuardError(f"unknown top-level config key {key!r}")
    return PipelineConfig(**kwargs)
