import hashlib
import json
import os
import subprocess
import sys

import numpy as np
import pytest

from vsumpipe.cli import EXIT_IO, EXIT_OK, EXIT_USAGE, EXIT_VALIDATION, main
from vsumpipe.dataio import load_model
from vsumpipe.selection import read_mask, write_mask

FAST = ["--epochs", "1", "--enc-hidden", "32", "--latent", "16",
        "--mlp-width", "12", "--conv-channels", "8", "--lstm-hidden", "6"]


def sha(path):
    return hashlib.sha256(open(path, "rb").read()).hexdigest()


def tree_hashes(root):
    out = {}
    for base, _, files in os.walk(root):
        for f in files:
            p = os.path.join(base, f)
            out[os.path.relpath(p, root)] = sha(p)
    return out


class TestExitCodes:
    def test_usage_error(self, capsys):
        assert main(["no-such-command"]) == EXIT_USAGE
        assert main(["segment"]) == EXIT_USAGE  # missing required flags

    def test_missing_file_is_io_error(self, tmp_path):
        assert main(["segment", "--features", str(tmp_path / "nope.fseq"),
                     "--out", str(tmp_path / "seg.json")]) == EXIT_IO

    def test_validation_error(self, tmp_path):
        bad = tmp_path / "bad.fseq"
        bad.write_bytes(b"XSEQ" + b"\x00" * 40)
        assert main(["segment", "--features", str(bad),
                     "--out", str(tmp_path / "seg.json")]) == EXIT_VALIDATION

    def test_console_entry_point(self):
        proc = subprocess.run([sys.executable, "-m", "vsumpipe.cli", "--version"],
                              capture_output=True, text=True)
        assert proc.returncode == 0


class TestEvaluateCommand:
    def test_identical_masks_full_f(self, tmp_path, capsys):
        mask = np.array([0, 1, 1, 0, 1], dtype=np.uint8)
        write_mask(mask, str(tmp_path / "m.txt"))
        code = main(["evaluate", "--pred", str(tmp_path / "m.txt"), "--gt", str(tmp_path / "m.txt"),
                     "--out", str(tmp_path / "r.json")])
        assert code == EXIT_OK
        out = capsys.readouterr().out
        assert "fscore 100.0000" in out
        doc = json.loads(open(tmp_path / "r.json").read())
        assert doc["fscore"] == 100.0


class TestSynthCommand:
    def test_deterministic_across_runs(self, tmp_path):
        args = ["synth", "--videos", "3", "--t-min", "50", "--t-max", "80",
                "--dim", "6", "--seed", "7"]
        assert main(args + ["--out", str(tmp_path / "a")]) == EXIT_OK
        assert main(args + ["--out", str(tmp_path / "b")]) == EXIT_OK
        assert tree_hashes(tmp_path / "a") == tree_hashes(tmp_path / "b")
        record = json.loads(open(tmp_path / "a" / "run_record.json").read())
        assert record["command"] == "synth" and record["artifacts"]


@pytest.fixture(scope="module")
def cli_dataset(tmp_path_factory):
    root = tmp_path_factory.mktemp("cliset")
    assert main(["synth", "--out", str(root), "--videos", "5", "--t-min", "60",
                 "--t-max", "90", "--dim", "8", "--source-fps", "4", "--seed", "13"]) == EXIT_OK
    return root


class TestPipelineCommands:
    def test_full_flow(self, cli_dataset, tmp_path):
        manifest = str(cli_dataset / "manifest.json")
        enc = str(tmp_path / "enc.mbdl")
        assert main(["train-encdec", "--manifest", manifest, "--stream", "rgb",
                     "--out", enc, *FAST]) == EXIT_OK
        bundle = str(tmp_path / "model.mbdl")
        assert main(["train-scorer", "--manifest", manifest, "--variant", "summarynet",
                     "--stream", "rgb", "--encdec", enc, "--out", bundle, *FAST]) == EXIT_OK
        loaded = load_model(bundle)
        assert loaded.variant == "summarynet"
        assert any(s.group == "encdec" for s in loaded.layer_specs)

        features = str(cli_dataset / "rgb" / "vid000.fseq")
        scores = str(tmp_path / "scores.json")
        assert main(["score", "--model", bundle, "--features", features, "--out", scores]) == EXIT_OK
        seg = str(tmp_path / "seg.json")
        assert main(["segment", "--features", features, "--out", seg]) == EXIT_OK
        outdir = str(tmp_path / "summary")
        assert main(["summarize", "--scores", scores, "--segmentation", seg,
                     "--out", outdir]) == EXIT_OK
        summary = json.loads(open(os.path.join(outdir, "summary.json")).read())
        mask = read_mask(os.path.join(outdir, "summary_mask.txt"))
        assert sum(b - a for a, b in summary["shots"]) == int(mask.sum())
        assert int(mask.sum()) <= summary["budget_frames"]

        gt = str(tmp_path / "gt.txt")
        write_mask(mask, gt)
        assert main(["evaluate", "--pred", os.path.join(outdir, "summary_mask.txt"),
                     "--gt", gt]) == EXIT_OK

    def test_train_scorer_deterministic(self, cli_dataset, tmp_path):
        manifest = str(cli_dataset / "manifest.json")
        args = ["train-scorer", "--manifest", manifest, "--variant", "baseline",
                "--stream", "rgb", "--seed", "3", *FAST]
        a, b = str(tmp_path / "a.mbdl"), str(tmp_path / "b.mbdl")
        assert main(args + ["--out", a]) == EXIT_OK
        assert main(args + ["--out", b]) == EXIT_OK
        assert sha(a) == sha(b)

    def test_crossval_command_deterministic(self, cli_dataset, tmp_path):
        manifest = str(cli_dataset / "manifest.json")
        args = ["crossval", "--manifest", manifest, "--variant", "baseline",
                "--stream", "rgb", "--folds", "5", "--seed", "2", *FAST]
        assert main(args + ["--out", str(tmp_path / "r1")]) == EXIT_OK
        assert main(args + ["--out", str(tmp_path / "r2")]) == EXIT_OK
        assert sha(tmp_path / "r1" / "report.json") == sha(tmp_path / "r2" / "report.json")
        report = json.loads(open(tmp_path / "r1" / "report.json").read())
        assert 0.0 <= report["aggregate_fscore"] <= 100.0
        assert len(report["per_video"]) == 5

    def test_config_file_precedence(self, cli_dataset, tmp_path):
        manifest = str(cli_dataset / "manifest.json")
        cfg_file = tmp_path / "cfg.json"
        cfg_file.write_text(json.dumps({"epochs": 1, "budget": 0.2, "enc_hidden": 32,
                                        "latent": 16, "mlp_width": 12, "conv_channels": 8,
                                        "lstm_hidden": 6}))
        out = str(tmp_path / "cv")
        assert main(["crossval", "--manifest", manifest, "--variant", "baseline", "--stream", "rgb",
                     "--folds", "5", "--config", str(cfg_file), "--budget", "0.1",
                     "--out", out]) == EXIT_OK
        record = json.loads(open(os.path.join(out, "run_record.json")).read())
        assert record["config"]["budget"] == 0.1  # flag beats config file
        assert record["config"]["epochs"] == 1  # config file beats default


class TestGradcheckCommand:
    def test_passes(self, capsys):
        assert main(["gradcheck"]) == EXIT_OK
        out = capsys.readouterr().out
        assert out.count("ok") == 5
