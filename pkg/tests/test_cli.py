"""CLI wiring: stage orchestration, exit codes, artifact determinism."""

import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from gifguard.cli import main
from gifguard.ingest.client import media_fixture_name
from gifguard.preprocess import encode_gif

from conftest import random_frames, write_search_fixture


@pytest.fixture
def runner():
    return CliRunner()


def _make_fixtures(root: Path, rng, tag, n):
    media = root / "media"
    media.mkdir(parents=True, exist_ok=True)
    entries = []
    for i in range(n):
        url = f"https://media.example/{tag}/{i}/giphy.gif"
        (media / media_fixture_name(url)).write_bytes(
            encode_gif(random_frames(rng, 3, side=16))
        )
        entries.append({"id": f"{tag}-{i}", "images": {"original": {"url": url}}})
    write_search_fixture(root, tag, [entries])


class TestCollect:
    def test_offline_fixture_collection(self, tmp_path, rng, runner):
        fixtures = tmp_path / "fixtures"
        _make_fixtures(fixtures, rng, "goodwork", 4)
        _make_fixtures(fixtures, rng, "racist", 3)
        seeds = tmp_path / "seeds.txt"
        seeds.write_text("racist,cyberbullying\ngoodwork,non_cyberbullying\n")
        result = runner.invoke(main, [
            "collect", "--data-root", str(tmp_path / "data"), "--seed-file", str(seeds),
            "--fixtures", str(fixtures), "--limit", "10",
        ])
        assert result.exit_code == 0, result.output
        manifest = (tmp_path / "data" / "manifest.jsonl").read_text().splitlines()
        header = json.loads(manifest[0])
        assert header["counts"] == {"cyberbullying": 3, "non_cyberbullying": 4}

    def test_requires_fixtures_or_live(self, tmp_path, runner):
        seeds = tmp_path / "seeds.txt"
        seeds.write_text("goodwork,non_cyberbullying\n")
        result = runner.invoke(main, [
            "collect", "--data-root", str(tmp_path / "d"), "--seed-file", str(seeds),
        ])
        assert result.exit_code == 1
        assert "--fixtures" in result.output


class TestExitCodes:
    def test_unknown_subcommand_is_usage_error(self, runner):
        assert runner.invoke(main, ["frobnicate"]).exit_code == 2

    def test_unknown_flag_is_usage_error(self, runner):
        assert runner.invoke(main, ["split", "--no-such-flag"]).exit_code == 2

    def test_missing_stage_is_domain_error(self, tmp_path, runner):
        result = runner.invoke(main, ["train", "--data-root", str(tmp_path)])
        assert result.exit_code == 1
        assert "split" in result.output  # names the missing stage

    def test_preprocess_before_collect_named(self, tmp_path, runner):
        result = runner.invoke(main, ["preprocess", "--data-root", str(tmp_path)])
        assert result.exit_code == 1
        assert "collect" in result.output


class TestReport:
    def test_reference_matrix_injected_as_predictions(self, tmp_path, runner):
        run_dir = tmp_path / "run"
        run_dir.mkdir()
        rows = ["key,true,predicted"]
        pairs = ([("cyberbullying", "cyberbullying")] * 934
                 + [("cyberbullying", "non_cyberbullying")] * 17
                 + [("non_cyberbullying", "cyberbullying")] * 40
                 + [("non_cyberbullying", "non_cyberbullying")] * 697)
        rows += [f"s{i},{t},{p}" for i, (t, p) in enumerate(pairs)]
        (run_dir / "predictions.csv").write_text("\n".join(rows) + "\n")
        result = runner.invoke(main, ["report", "--run", str(run_dir)])
        assert result.exit_code == 0, result.output
        assert "0.9662" in result.output
        text = (run_dir / "report.txt").read_text()
        assert "0.9662" in text.splitlines()[0]
        confusion_csv = (run_dir / "confusion.csv").read_text().splitlines()
        assert confusion_csv[1] == "cyberbullying,934,17"
        assert confusion_csv[2] == "non_cyberbullying,40,697"

    def test_report_without_predictions_fails(self, tmp_path, runner):
        result = runner.invoke(main, ["report", "--run", str(tmp_path)])
        assert result.exit_code == 1
        assert "evaluate" in result.output


class TestSmokeDeterminism:
    def test_repeated_seed_produces_identical_artifacts(self, tmp_path, runner):
        outputs = []
        for name in ("first", "second"):
            out = tmp_path / name
            result = runner.invoke(main, [
                "smoke", "--out", str(out), "--seed", "7",
                "--gifs-per-class", "6", "--epochs", "6",
            ])
            assert result.exit_code == 0, result.output
            run = out / "run"
            outputs.append({
                "report": (run / "report.json").read_bytes(),
                "predictions": (run / "predictions.csv").read_bytes(),
                "history": (run / "history.csv").read_bytes(),
                "run_config": (run / "run.json").read_bytes(),
                "manifest": (out / "data" / "manifest.jsonl").read_bytes(),
            })
        assert outputs[0] == outputs[1]

    def test_failed_thresholds_exit_nonzero(self, tmp_path, runner, monkeypatch):
        import gifguard.pipeline as pipeline

        def rigged(out_dir, **kwargs):
            return {"ok": False, "val_accuracy": 0.5}

        monkeypatch.setattr(pipeline, "stage_smoke", rigged)
        result = runner.invoke(main, ["smoke", "--out", str(tmp_path / "x")])
        assert result.exit_code == 1
