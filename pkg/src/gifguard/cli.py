"""Command-line entry point.

Subcommands cover every pipeline stage plus an end-to-end synthetic smoke
run. Exit codes: 0 success, 1 domain error (bad inputs, missing stage,
failed thresholds), 2 usage error.
"""

from __future__ import annotations

import json
import logging
import os
import sys
from pathlib import Path

import click

from . import pipeline
from .config import PipelineConfig, load_config
from .errors import GifGuardError

logger = logging.getLogger(__name__)


def _config_from(ctx_params: dict) -> PipelineConfig:
    overrides = {
        key: ctx_params.get(key)
        for key in ("data_root", "run_dir", "seed", "weights")
        if ctx_params.get(key) is not None
    }
    return load_config(ctx_params.get("config"), overrides)


def common_options(fn):
    fn = click.option("--config", type=click.Path(exists=True, path_type=Path),
                      default=None, help="YAML pipeline config.")(fn)
    fn = click.option("--data-root", type=click.Path(path_type=Path), default=None)(fn)
    fn = click.option("--run-dir", type=click.Path(path_type=Path), default=None)(fn)
    fn = click.option("--seed", type=int, default=None)(fn)
    return fn


@click.group()
@click.option("-v", "--verbose", is_flag=True, help="Debug logging.")
def main(verbose: bool):
    """GIF collection, annotation and cyberbullying-classifier pipeline."""
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
    )


def run_stage(fn):
    try:
        fn()
    except GifGuardError as exc:
        raise click.ClickException(str(exc)) from exc


@main.command()
@common_options
@click.option("--seed-file", type=click.Path(exists=True, path_type=Path), default=None)
@click.option("--api-key", default=None, help="Overrides GIFGUARD_API_KEY.")
@click.option("--limit", type=int, default=25, show_default=True,
              help="Max GIFs per hashtag seed.")
@click.option("--fixtures", type=click.Path(exists=True, path_type=Path), default=None,
              help="Replay recorded API responses from this directory.")
@click.option("--live", is_flag=True, help="Talk to the real API.")
def collect(config, data_root, run_dir, seed, seed_file, api_key, limit, fixtures, live):
    """Search hashtag seeds and download GIF media into the data root."""
    cfg = _config_from(locals())
    if seed_file is not None:
        cfg.seed_file = seed_file
    key = api_key or os.environ.get("GIFGUARD_API_KEY") or ""
    if not key and fixtures is not None:
        key = "fixture-key"

    def run():
        manifest = pipeline.stage_collect(cfg, key, limit, fixtures, live)
        click.echo(f"collected {len(manifest)} records: {manifest.counts}")

    run_stage(run)


@main.command()
@common_options
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
@click.option("--annotator", "annotators", multiple=True, metavar="ID=COUNT",
              help="Assign the first COUNT manifest GIFs to annotator ID (round 1).")
@click.option("--static-dir", type=click.Path(path_type=Path), default=None,
              help="Built annotation UI to serve at the web root.")
def serve(config, data_root, run_dir, seed, host, port, annotators, static_dir):
    """Run the annotation HTTP service (and host the static UI)."""
    cfg = _config_from(locals())

    def run():
        import uvicorn

        from .annotate.api import create_app
        from .annotate.records import Round
        from .annotate.service import save_assignments

        service = pipeline.open_service(cfg)
        for spec in annotators:
            name, _, count = spec.partition("=")
            ids = [r.id for r in service.manifest.records][: int(count or 0) or None]
            service.assign(Round.ROUND1, name, ids)
        if annotators:
            save_assignments(service.assignments, cfg.data_root / "assignments.json")
        default_static = Path(__file__).resolve().parents[2] / "frontend" / "dist"
        chosen_static = static_dir or (default_static if default_static.is_dir() else None)
        app = create_app(service, cfg.data_root, chosen_static)
        uvicorn.run(app, host=host, port=port, log_level="info")

    run_stage(run)


@main.command()
@common_options
def preprocess(config, data_root, run_dir, seed):
    """Extract, dedup, blur-filter and categorize frames."""
    cfg = _config_from(locals())

    def run():
        _, summary = pipeline.stage_preprocess(cfg)
        click.echo(summary.to_text())

    run_stage(run)


@main.command()
@common_options
def split(config, data_root, run_dir, seed):
    """Assign train/val/test splits over the frame index."""
    cfg = _config_from(locals())

    def run():
        sizes = pipeline.stage_split(cfg)
        click.echo(json.dumps(sizes))

    run_stage(run)


@main.command()
@common_options
def augment(config, data_root, run_dir, seed):
    """Expand the training split with affine/flip variants."""
    cfg = _config_from(locals())

    def run():
        added = pipeline.stage_augment(cfg)
        click.echo(f"added {added} augmented frames")

    run_stage(run)


@main.command()
@common_options
@click.option("--weights", type=click.Path(path_type=Path), default=None,
              help="Backbone weights .npz file.")
def train(config, data_root, run_dir, seed, weights):
    """Hold-out training with the callback protocol."""
    cfg = _config_from(locals())

    def run():
        _, history = pipeline.stage_train(cfg)
        best = next(r for r in history.epochs if r.epoch == history.best_epoch)
        click.echo(
            f"{history.stop_reason} after {len(history.epochs)} epochs; "
            f"best epoch {history.best_epoch} val_acc {best.val_accuracy:.4f}"
        )

    run_stage(run)


@main.command()
@common_options
@click.option("--weights", type=click.Path(path_type=Path), default=None)
def crossval(config, data_root, run_dir, seed, weights):
    """K-fold cross-validation over the train+val pool."""
    cfg = _config_from(locals())

    def run():
        result = pipeline.stage_crossval(cfg)
        click.echo(result.aggregate.to_text())

    run_stage(run)


@main.command()
@common_options
@click.option("--weights", type=click.Path(path_type=Path), default=None)
def evaluate(config, data_root, run_dir, seed, weights):
    """Predict the held-out test split and write the report files."""
    cfg = _config_from(locals())

    def run():
        report = pipeline.stage_evaluate(cfg)
        click.echo(report.to_text())

    run_stage(run)


@main.command()
@click.option("--run", "run_dir", type=click.Path(exists=True, path_type=Path),
              required=True, help="Run directory holding predictions.csv.")
def report(run_dir):
    """Re-render report files from stored predictions."""
    run_stage(lambda: click.echo(pipeline.stage_report(run_dir).to_text()))


@main.command()
@click.option("--out", type=click.Path(path_type=Path), default=Path("smoke-out"),
              show_default=True)
@click.option("--seed", type=int, default=7, show_default=True)
@click.option("--gifs-per-class", type=int, default=40, show_default=True)
@click.option("--epochs", type=int, default=10, show_default=True)
def smoke(out, seed, gifs_per_class, epochs):
    """End-to-end synthetic pipeline run; fails if thresholds are missed."""

    def run():
        checks = pipeline.stage_smoke(out, seed=seed, gifs_per_class=gifs_per_class,
                                      epochs=epochs)
        click.echo(json.dumps(checks, indent=2, sort_keys=True))
        if not checks["ok"]:
            raise GifGuardError("smoke run missed its acceptance thresholds")

    run_stage(run)


if __name__ == "__main__":
    sys.exit(main())
