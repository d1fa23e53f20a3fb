"""Stage orchestration shared by the CLI.

Each stage reads the artifacts of the previous one and writes its own under
the data root / run dir without mutating its inputs:

    collect     manifest.jsonl + gifs/
    (serve)     annotations.jsonl via the HTTP service
    preprocess  frames/ + frames/index.jsonl + manifest_cleaned.jsonl + summary
    split       frames/index.split.jsonl
    augment     frames/index.augmented.jsonl + augmented PNGs
    train       run_dir: history.csv, checkpoints/, model.json, run.json, curves
    evaluate    run_dir: predictions.csv + report.{json,txt} + confusion.csv
"""

from __future__ import annotations

import csv
import json
import logging
from pathlib import Path

import numpy as np

from .annotate.records import AnnotationStore
from .annotate.service import AnnotationService
from .augment.dataset import augment_dataset
from .config import PipelineConfig
from .errors import StageError
from .ingest.client import FixtureTransport, LiveTransport, SearchClient, TokenBucket
from .ingest.download import GifStore, build_manifest, download_all
from .ingest.records import DatasetManifest, load_manifest, save_manifest
from .ingest.seeds import load_seed_file
from .labels import CLASS_NAMES, CLASS_ORDER, Label
from .metrics.confusion import confusion
from .metrics.curves import export_curves
from .metrics.report import classification_report, save_report
from .model.classifier import build_classifier, save_model_sidecar
from .model.vgg import random_backbone_weights, save_backbone_weights
from .preprocess.categorize import load_overrides
from .preprocess.dataset import (
    FrameIndexEntry,
    build_frame_dataset,
    load_frame_image,
    save_frame_image,
    save_index,
)
from .preprocess.frames import FrameSample, Split
from .preprocess.imageops import resize_normalize
from .seeding import derive_seed
from .train.loop import ArrayDataset, kfold_train, predict_classes, train_holdout, write_run_config
from .train.splitting import SplitItem, split_dataset

logger = logging.getLogger(__name__)

MANIFEST = "manifest.jsonl"
MANIFEST_CLEANED = "manifest_cleaned.jsonl"
ANNOTATIONS = "annotations.jsonl"
OVERRIDES = "overrides.jsonl"
INDEX = "frames/index.jsonl"
INDEX_SPLIT = "frames/index.split.jsonl"
INDEX_AUGMENTED = "frames/index.augmented.jsonl"

LABEL_TO_CLASS = {label: i for i, label in enumerate(CLASS_ORDER)}


def _read_index(path: Path) -> list[FrameIndexEntry]:
    return [
        FrameIndexEntry.from_json(json.loads(line))
        for line in path.read_text(encoding="utf-8").splitlines()
        if line.strip()
    ]


def _write_index(entries: list[FrameIndexEntry], path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as fh:
        for entry in entries:
            fh.write(json.dumps(entry.to_json(), sort_keys=True) + "\n")


def require(path: Path, stage: str) -> Path:
    if not path.exists():
        raise StageError(f"missing {path.name}; run the '{stage}' stage first")
    return path


# -- collect ---------------------------------------------------------------

def stage_collect(config: PipelineConfig, api_key: str, limit: int,
                  fixtures: Path | None, live: bool = False,
                  parallelism: int = 4, rate_per_sec: float = 2.0) -> DatasetManifest:
    if config.seed_file is None:
        raise StageError("collect needs a seed file (config key 'seed_file')")
    seeds = load_seed_file(config.seed_file)
    if fixtures is not None:
        transport = FixtureTransport(fixtures)
    elif live:
        transport = LiveTransport()
    else:
        raise StageError("collect runs offline by default: pass --fixtures DIR or --live")
    client = SearchClient(
        transport=transport,
        api_key=api_key,
        rate_limiter=TokenBucket(rate_per_sec=rate_per_sec, capacity=max(1, int(rate_per_sec))),
    )
    store = GifStore(config.data_root)
    for seed in seeds:
        found = client.search_gifs(seed, limit)
        logger.info("seed %s: %d results", seed.tag, len(found))
        download_all(found, store, client, parallelism=parallelism)
    manifest = build_manifest(config.data_root)
    save_manifest(manifest, config.data_root / MANIFEST)
    return manifest


# -- annotation plumbing -----------------------------------------------------

def open_service(config: PipelineConfig) -> AnnotationService:
    manifest = load_manifest(require(config.data_root / MANIFEST, "collect"))
    store = AnnotationStore(config.data_root / ANNOTATIONS)
    assignments_path = config.data_root / "assignments.json"
    assignments = None
    if assignments_path.exists():
        assignments = json.loads(assignments_path.read_text(encoding="utf-8"))
    return AnnotationService(manifest, store, assignments)


def final_labels(config: PipelineConfig) -> dict[str, Label]:
    store = AnnotationStore(require(config.data_root / ANNOTATIONS, "serve"))
    manifest = load_manifest(require(config.data_root / MANIFEST, "collect"))
    service = AnnotationService(manifest, store)
    labels = service.final_labels()
    if not labels:
        raise StageError(
            "no finalized labels in the annotation log; finalize via the service first"
        )
    return labels


# -- preprocess --------------------------------------------------------------

def stage_preprocess(config: PipelineConfig):
    manifest = load_manifest(require(config.data_root / MANIFEST, "collect"))
    labels = final_labels(config)
    overrides = {}
    overrides_path = config.data_root / OVERRIDES
    if overrides_path.exists():
        overrides = load_overrides(overrides_path)
    entries, summary, cleaned = build_frame_dataset(
        manifest, config.preprocess, labels, config.data_root, overrides=overrides
    )
    save_index(entries, config.data_root)
    save_manifest(cleaned, config.data_root / MANIFEST_CLEANED)
    (config.data_root / "summary.csv").write_text(summary.to_csv(), encoding="utf-8")
    (config.data_root / "summary.txt").write_text(summary.to_text() + "\n", encoding="utf-8")
    return entries, summary


# -- split -------------------------------------------------------------------

def stage_split(config: PipelineConfig) -> dict[str, int]:
    # Default order is split -> augment; paper_mode augments the whole frame
    # index first and splits the expanded set (a leaky ordering kept only
    # for replication runs), so read the augmented index when it exists.
    source = config.data_root / INDEX
    if config.train.paper_mode and (config.data_root / INDEX_AUGMENTED).exists():
        source = config.data_root / INDEX_AUGMENTED
    entries = _read_index(require(source, "preprocess"))
    usable = [e for e in entries if not e.excluded]
    items = [SplitItem(key=e.key, gif_id=e.gif_id, label=e.label.value) for e in usable]
    # Frame-level splitting cannot keep GIFs whole once augmented variants
    # are in the pool, so paper_mode forces grouping off.
    grouping = config.train.group_by_gif and not config.train.paper_mode
    assignment = split_dataset(
        items, config.train.split_ratios, config.train.seed, group_by_gif=grouping,
    )
    for entry in usable:
        entry.split = assignment.by_key[entry.key]
    _write_index(entries, config.data_root / INDEX_SPLIT)
    return {s.value: n for s, n in assignment.sizes().items()}


# -- augment -----------------------------------------------------------------

def stage_augment(config: PipelineConfig) -> int:
    paper_mode = config.train.paper_mode
    if paper_mode:
        source = require(config.data_root / INDEX, "preprocess")
    else:
        source = require(config.data_root / INDEX_SPLIT, "split")
    entries = _read_index(source)
    to_augment = [
        e for e in entries
        if not e.excluded and (paper_mode or e.split == Split.TRAIN)
    ]
    frames = [
        FrameSample(
            gif_id=e.gif_id,
            frame_index=e.frame_index,
            image=load_frame_image(config.data_root, e.path),
            label=e.label,
            split=e.split,
        )
        for e in to_augment
    ]
    augmented = augment_dataset(frames, config.augment, paper_mode=paper_mode)
    by_key = {e.key: e for e in entries}
    new_entries = list(entries)
    added = 0
    for sample in augmented:
        if sample.provenance.kind != "augmented":
            continue
        variant = sample.provenance.variant
        relpath = f"frames/{sample.gif_id}/{sample.frame_index:05d}_aug_{variant}.png"
        save_frame_image(sample.image, config.data_root, relpath)
        parent = by_key[f"{sample.gif_id}/{sample.frame_index}"]
        new_entries.append(FrameIndexEntry(
            gif_id=sample.gif_id,
            frame_index=sample.frame_index,
            path=relpath,
            label=sample.label,
            split=sample.split,
            provenance=sample.provenance,
            blur=parent.blur,
            phash=parent.phash,
        ))
        added += 1
    _write_index(new_entries, config.data_root / INDEX_AUGMENTED)
    return added


# -- training ------------------------------------------------------------------

def _training_index(config: PipelineConfig) -> list[FrameIndexEntry]:
    if config.train.paper_mode:
        # augment -> split: the split index already holds the augmented set
        return _read_index(require(config.data_root / INDEX_SPLIT, "split"))
    for name in (INDEX_AUGMENTED, INDEX_SPLIT):
        path = config.data_root / name
        if path.exists():
            return _read_index(path)
    raise StageError("missing frames/index.split.jsonl; run the 'split' stage first")


def dataset_for(entries: list[FrameIndexEntry], config: PipelineConfig,
                splits: set[Split]) -> ArrayDataset:
    chosen = [e for e in entries if not e.excluded and e.split in splits]
    chosen.sort(key=lambda e: e.key)
    if not chosen:
        wanted = sorted(s.value for s in splits)
        raise StageError(f"no frames in split(s) {wanted}")
    side = config.classifier.input_side
    images = np.stack([
        resize_normalize(load_frame_image(config.data_root, e.path), side) for e in chosen
    ])
    labels = np.array([LABEL_TO_CLASS[e.label] for e in chosen], dtype=np.int64)
    return ArrayDataset(
        images=images,
        labels=labels,
        keys=[e.key for e in chosen],
        gif_ids=[e.gif_id for e in chosen],
    )


def _require_weights(config: PipelineConfig) -> Path:
    if config.weights is None:
        raise StageError("no backbone weights configured (config key 'weights')")
    return config.weights


def stage_train(config: PipelineConfig):
    entries = _training_index(config)
    train_ds = dataset_for(entries, config, {Split.TRAIN})
    val_ds = dataset_for(entries, config, {Split.VAL})
    weights_path = _require_weights(config)
    model = build_classifier(config.classifier, weights_path,
                             head_seed=derive_seed(config.seed, "holdout"))
    run_dir = config.run_dir
    model, history = train_holdout(model, train_ds, val_ds, config.train, run_dir=run_dir)
    write_run_config(run_dir, config.train, train_ds.digest())
    save_model_sidecar(config.classifier, config.seed, weights_path, run_dir / "model.json")
    export_curves(history, run_dir / "curves")
    return model, history


def stage_crossval(config: PipelineConfig):
    entries = _read_index(require(config.data_root / INDEX_SPLIT, "split"))
    pool = dataset_for(entries, config, {Split.TRAIN, Split.VAL})
    weights_path = _require_weights(config)

    def builder(head_seed: int):
        return build_classifier(config.classifier, weights_path, head_seed=head_seed)

    result = kfold_train(pool, config.train, builder, run_dir=config.run_dir)
    for fold in result.folds:
        save_report(fold.report, config.run_dir / f"fold_{fold.fold}")
        export_curves(fold.history, config.run_dir / f"fold_{fold.fold}" / "curves")
    save_report(result.aggregate, config.run_dir / "aggregate")
    write_run_config(config.run_dir, config.train, pool.digest(),
                     extra={"mode": "crossval"})
    return result


def _load_best_model(config: PipelineConfig):
    best = require(config.run_dir / "checkpoints" / "best.pt", "train")
    import torch

    model = build_classifier(config.classifier, _require_weights(config),
                             head_seed=derive_seed(config.seed, "holdout"))
    model.load_head_state(torch.load(best, weights_only=True))
    return model


def stage_evaluate(config: PipelineConfig):
    entries = _training_index(config)
    test_ds = dataset_for(entries, config, {Split.TEST})
    model = _load_best_model(config)
    predicted = predict_classes(model, test_ds, config.train.batch_size)
    rows = sorted(
        (str(key), CLASS_NAMES[t], CLASS_NAMES[p])
        for key, t, p in zip(test_ds.keys, test_ds.labels, predicted)
    )
    pred_path = config.run_dir / "predictions.csv"
    pred_path.parent.mkdir(parents=True, exist_ok=True)
    with pred_path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["key", "true", "predicted"])
        writer.writerows(rows)
    return stage_report(config.run_dir)


def stage_report(run_dir: Path):
    """(Re)render report files from a run's stored predictions."""
    run_dir = Path(run_dir)
    pred_path = require(run_dir / "predictions.csv", "evaluate")
    with pred_path.open(newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    if not rows:
        raise StageError(f"{pred_path} holds no predictions")
    y_true = [r["true"] for r in rows]
    y_pred = [r["predicted"] for r in rows]
    report = classification_report(confusion(y_true, y_pred, CLASS_NAMES))
    save_report(report, run_dir)
    return report


# -- smoke ---------------------------------------------------------------------

def smoke_config(out_dir: Path, seed: int, epochs: int = 10) -> PipelineConfig:
    from .augment.affine import AugmentParams
    from .model.classifier import ClassifierSpec
    from .preprocess.frames import PreprocessConfig
    from .train.config import TrainConfig

    out_dir = Path(out_dir)
    return PipelineConfig(
        data_root=out_dir / "data",
        run_dir=out_dir / "run",
        weights=out_dir / "weights.npz",
        seed=seed,
        preprocess=PreprocessConfig(blur_threshold=50.0),
        augment=AugmentParams(factor=2, seed=seed),
        classifier=ClassifierSpec(input_side=64),
        train=TrainConfig(epochs=epochs, initial_lr=1e-3, seed=seed),
    )


def stage_smoke(out_dir: Path, seed: int = 7, gifs_per_class: int = 40,
                epochs: int = 10, val_accuracy_floor: float = 0.95) -> dict:
    """Generate the synthetic dataset and run the full pipeline on it.

    Returns the check results; ``ok`` is False when any threshold is
    missed. The backbone is randomly initialized (seeded) since the real
    pretrained file is not shipped; the separability of the synthetic
    classes does not depend on pretrained features.
    """
    from .synth import make_synthetic_dataset

    config = smoke_config(out_dir, seed, epochs)
    make_synthetic_dataset(config.data_root, gifs_per_class=gifs_per_class, seed=seed)
    save_backbone_weights(
        random_backbone_weights(derive_seed(seed, "backbone")), config.weights
    )
    stage_preprocess(config)
    split_sizes = stage_split(config)
    added = stage_augment(config)
    _, history = stage_train(config)
    report = stage_evaluate(config)

    best = next(r for r in history.epochs if r.epoch == history.best_epoch)
    curves_rows = (config.run_dir / "curves" / "curves.csv").read_text().splitlines()
    report_json = json.loads((config.run_dir / "report.json").read_text())
    checks = {
        "val_accuracy": best.val_accuracy,
        "best_epoch": history.best_epoch,
        "epochs_run": len(history.epochs),
        "split_sizes": split_sizes,
        "augmented_added": added,
        "weighted_recall_equals_accuracy":
            report_json["weighted_avg"]["recall"] == report_json["accuracy"],
        "curve_rows": len(curves_rows) - 1,
        "test_accuracy": report.accuracy,
    }
    checks["ok"] = bool(
        best.val_accuracy >= val_accuracy_floor
        and history.best_epoch <= epochs
        and checks["weighted_recall_equals_accuracy"]
        and checks["curve_rows"] == len(history.epochs)
    )
    return checks
