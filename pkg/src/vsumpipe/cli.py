"""Command-line interface.

Exit codes: 0 success, 1 validation/format error, 2 I/O error, 64 usage.
Every command writes a reproducibility record next to its outputs (full
config, seed, and sha256 of each artifact) so a run can be replayed and
compared byte for byte.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys

import numpy as np

from . import __version__
from .config import RunConfig, load_config_file
from .dataio import (
    _write_atomic,
    load_model,
    read_features,
    read_manifest,
    save_model,
)
from .encdec import encdec_from_bundle, encdec_to_bundle
from .errors import FormatError, IoError
from .evaluate import crossval, format_table, overlap_metrics, write_report
from .kts import max_segment_frames, read_segmentation, segment, write_segmentation
from .pipeline import fit_encoder, fit_scorer, load_videos
from .preprocess import subsample
from .scorer import read_scores, score_video, scorer_from_bundle, scorer_to_bundle, write_scores
from .selection import binarize_percentile, read_mask, summarize, write_mask, write_summary
from .synth import SynthSpec, generate

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_IO = 2
EXIT_USAGE = 64


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _sha256(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def _write_record(out_dir: str, command: str, cfg: RunConfig, artifacts: list, extra: dict | None = None) -> None:
    record = {
        "command": command,
        "config": cfg.to_dict(),
        "artifacts": {os.path.relpath(p, out_dir): _sha256(p) for p in sorted(artifacts)},
    }
    if extra:
        record["extra"] = extra
    _write_atomic(os.path.join(out_dir, "run_record.json"), json.dumps(record, sort_keys=True).encode("utf-8"))


def _build_config(args) -> RunConfig:
    cfg = RunConfig()
    if getattr(args, "config", None):
        cfg = RunConfig.from_dict({**cfg.to_dict(), **load_config_file(args.config)})
    overrides = {}
    for flag, field in [
        ("seed", "seed"), ("variant", "variant"), ("stream", "stream"), ("budget", "budget"),
        ("percentile", "percentile"), ("fps", "target_fps"), ("epochs", "epochs"), ("batch", "batch"),
        ("lr", "lr"), ("kts_penalty", "kts_penalty"), ("kts_kernel", "kts_kernel"),
        ("max_shot_seconds", "max_shot_seconds"), ("folds", "folds"), ("eval_mask", "eval_mask"),
        ("encdec_scope", "encdec_scope"), ("latent", "latent"), ("enc_hidden", "enc_hidden"),
        ("mlp_width", "mlp_width"), ("conv_channels", "conv_channels"), ("lstm_hidden", "lstm_hidden"),
        ("window_scoring", "window_scoring"), ("window_encdec", "window_encdec"),
    ]:
        value = getattr(args, flag, None)
        if value is not None:
            overrides[field] = value
    if getattr(args, "stratify", False):
        overrides["stratify"] = True
    return cfg.override(**overrides)


def _add_common(p: _Parser, training: bool = False) -> None:
    p.add_argument("--config", help="JSON config file; keys mirror the run configuration")
    p.add_argument("--seed", type=int)
    if training:
        p.add_argument("--epochs", type=int)
        p.add_argument("--batch", type=int)
        p.add_argument("--lr", type=float)
        p.add_argument("--fps", type=float, help="scoring-rate subsample target (frames/s)")
        p.add_argument("--window-scoring", dest="window_scoring", type=int)
        p.add_argument("--window-encdec", dest="window_encdec", type=int)
        p.add_argument("--latent", type=int)
        p.add_argument("--enc-hidden", dest="enc_hidden", type=int)
        p.add_argument("--mlp-width", dest="mlp_width", type=int)
        p.add_argument("--conv-channels", dest="conv_channels", type=int)
        p.add_argument("--lstm-hidden", dest="lstm_hidden", type=int)


def build_parser() -> _Parser:
    parser = _Parser(prog="vsumpipe", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", parents=[], help="generate a synthetic dataset with planted truth")
    p.add_argument("--out", required=True)
    p.add_argument("--videos", type=int, default=10)
    p.add_argument("--dim", type=int, default=64)
    p.add_argument("--t-min", type=int, default=300)
    p.add_argument("--t-max", type=int, default=600)
    p.add_argument("--users", type=int, default=5)
    p.add_argument("--user-noise", type=float, default=0.1)
    p.add_argument("--feature-noise", type=float, default=0.6)
    p.add_argument("--summary-fraction", type=float, default=0.15)
    p.add_argument("--source-fps", type=float, default=4.0)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("train-encdec", help="phase 1: train the encoder-decoder for one stream")
    p.add_argument("--manifest", required=True)
    p.add_argument("--stream", choices=("rgb", "flow"), default="rgb")
    p.add_argument("--out", required=True)
    _add_common(p, training=True)

    p = sub.add_parser("train-scorer", help="phase 2: train a score model; emits a full bundle")
    p.add_argument("--manifest", required=True)
    p.add_argument("--variant", choices=("baseline", "convnet", "convlstm", "summarynet"))
    p.add_argument("--stream", choices=("rgb", "flow"), default="rgb")
    p.add_argument("--encdec", help="bundle with pre-trained encoder-decoder weights")
    p.add_argument("--out", required=True)
    _add_common(p, training=True)

    p = sub.add_parser("score", help="per-frame scores for one feature file")
    p.add_argument("--model", required=True)
    p.add_argument("--features", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--fps", type=float)
    p.add_argument("--config")
    p.add_argument("--seed", type=int)

    p = sub.add_parser("segment", help="temporal segmentation of one feature file")
    p.add_argument("--features", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--fps", type=float)
    p.add_argument("--kts-penalty", dest="kts_penalty", type=float)
    p.add_argument("--kts-kernel", dest="kts_kernel", choices=("linear", "rbf"))
    p.add_argument("--kts-gamma", dest="kts_gamma", type=float, default=None)
    p.add_argument("--max-shot-seconds", dest="max_shot_seconds", type=float)
    p.add_argument("--config")
    p.add_argument("--seed", type=int)

    p = sub.add_parser("summarize", help="budgeted key-shot summary from scores + segmentation")
    p.add_argument("--scores", required=True)
    p.add_argument("--segmentation", required=True)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--budget", type=float)
    p.add_argument("--percentile", type=float)
    p.add_argument("--config")
    p.add_argument("--seed", type=int)

    p = sub.add_parser("evaluate", help="overlap metrics between two frame masks")
    p.add_argument("--pred", required=True)
    p.add_argument("--gt", required=True)
    p.add_argument("--out")

    p = sub.add_parser("crossval", help="k-fold protocol over a dataset manifest")
    p.add_argument("--manifest", required=True)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--variant", choices=("baseline", "convnet", "convlstm", "summarynet"))
    p.add_argument("--stream", choices=("rgb", "flow", "fused"))
    p.add_argument("--folds", type=int)
    p.add_argument("--stratify", action="store_true")
    p.add_argument("--eval-mask", dest="eval_mask", choices=("knapsack", "percentile"))
    p.add_argument("--encdec-scope", dest="encdec_scope", choices=("global", "fold"))
    p.add_argument("--budget", type=float)
    p.add_argument("--percentile", type=float)
    p.add_argument("--kts-penalty", dest="kts_penalty", type=float)
    p.add_argument("--kts-kernel", dest="kts_kernel", choices=("linear", "rbf"))
    p.add_argument("--max-shot-seconds", dest="max_shot_seconds", type=float)
    p.add_argument("--dump-curves", action="store_true",
                   help="write per-video score/ground-truth curves under <out>/curves/")
    _add_common(p, training=True)

    p = sub.add_parser("gradcheck", help="central-difference check of every layer kind")
    p.add_argument("--step", type=float, default=1e-5)
    p.add_argument("--tolerance", type=float, default=1e-4)

    return parser


# ---------------------------------------------------------------------------
# command handlers


def _cmd_synth(args) -> int:
    spec = SynthSpec(
        n_videos=args.videos,
        t_range=(args.t_min, args.t_max),
        dim=args.dim,
        n_users=args.users,
        user_noise=args.user_noise,
        feature_noise=args.feature_noise,
        summary_fraction=args.summary_fraction,
        fps=args.source_fps,
        seed=args.seed,
    )
    generate(spec, args.out)
    artifacts = []
    for root, _, files in os.walk(args.out):
        artifacts.extend(os.path.join(root, f) for f in files if f != "run_record.json")
    cfg = RunConfig(seed=args.seed)
    _write_record(args.out, "synth", cfg, artifacts, extra={"synth": spec.__dict__ | {"t_range": list(spec.t_range), "n_segments_range": list(spec.n_segments_range)}})
    print(f"wrote {len(artifacts)} files under {args.out}")
    return EXIT_OK


def _cmd_train_encdec(args) -> int:
    cfg = _build_config(args).override(stream=args.stream, kts_stream=args.stream)
    manifest = read_manifest(args.manifest)
    videos = load_videos(manifest, cfg)
    model = fit_encoder(videos, args.stream, cfg)
    save_model(encdec_to_bundle(model, args.stream), args.out)
    out_dir = os.path.dirname(os.path.abspath(args.out))
    _write_record(out_dir, "train-encdec", cfg, [args.out])
    print(f"encoder-decoder bundle -> {args.out}")
    return EXIT_OK


def _cmd_train_scorer(args) -> int:
    cfg = _build_config(args).override(stream=args.stream, kts_stream=args.stream)
    manifest = read_manifest(args.manifest)
    videos = load_videos(manifest, cfg)
    encoder = None
    if cfg.variant == "summarynet":
        encoder = encdec_from_bundle(load_model(args.encdec)) if args.encdec else fit_encoder(videos, args.stream, cfg)
    models = fit_scorer(videos, args.stream, cfg, encoder)
    save_model(scorer_to_bundle(models.scorer, args.stream, encdec_model=encoder), args.out)
    out_dir = os.path.dirname(os.path.abspath(args.out))
    _write_record(out_dir, "train-scorer", cfg, [args.out])
    print(f"{cfg.variant} bundle -> {args.out}")
    return EXIT_OK


def _cmd_score(args) -> int:
    cfg = _build_config(args)
    bundle = load_model(args.model)
    model, encoder = scorer_from_bundle(bundle)
    seq = read_features(args.features)
    sub, _ = subsample(seq, None, min(cfg.target_fps, seq.fps))
    frames = sub.frames.astype(np.float64)
    if encoder is not None:
        frames = encoder.encode(frames)
    sv = score_video(model, frames, model.cfg.window_len, video_id=seq.video_id)
    write_scores(sv, args.out)
    write_scores(sv, os.path.splitext(args.out)[0] + ".txt", as_json=False)
    out_dir = os.path.dirname(os.path.abspath(args.out))
    _write_record(out_dir, "score", cfg, [args.out, os.path.splitext(args.out)[0] + ".txt"])
    print(f"scores -> {args.out} (coverage {sv.coverage[0]}..{sv.coverage[1]})")
    return EXIT_OK


def _cmd_segment(args) -> int:
    cfg = _build_config(args)
    seq = read_features(args.features)
    sub, _ = subsample(seq, None, min(cfg.target_fps, seq.fps))
    cap = max_segment_frames(cfg.max_shot_seconds, sub.fps)
    gamma = args.kts_gamma if args.kts_gamma is not None else (cfg.kts_gamma if cfg.kts_kernel == "rbf" else None)
    seg = segment(sub, kernel=cfg.kts_kernel, penalty_c=cfg.kts_penalty, max_seg_frames=cap, gamma=gamma)
    write_segmentation(seg, args.out)
    write_segmentation(seg, os.path.splitext(args.out)[0] + ".txt", as_json=False)
    out_dir = os.path.dirname(os.path.abspath(args.out))
    _write_record(out_dir, "segment", cfg, [args.out, os.path.splitext(args.out)[0] + ".txt"])
    print(f"{seg.n_segments} segments -> {args.out}")
    return EXIT_OK


def _cmd_summarize(args) -> int:
    cfg = _build_config(args)
    sv = read_scores(args.scores)
    seg = read_segmentation(args.segmentation)
    summary = summarize(sv.scores, seg, budget_fraction=cfg.budget)
    pct = binarize_percentile(sv.scores, cfg.percentile)
    os.makedirs(args.out, exist_ok=True)
    paths = {
        "summary": os.path.join(args.out, "summary.json"),
        "mask": os.path.join(args.out, "summary_mask.txt"),
        "pct": os.path.join(args.out, "percentile_mask.txt"),
    }
    write_summary(summary, paths["summary"])
    write_mask(summary.frame_mask, paths["mask"])
    write_mask(pct, paths["pct"])
    _write_record(args.out, "summarize", cfg, list(paths.values()))
    print(f"{len(summary.shots)} shots, {summary.selected_frames}/{summary.budget_frames} frames -> {args.out}")
    return EXIT_OK


def _cmd_evaluate(args) -> int:
    pred = read_mask(args.pred)
    gt = read_mask(args.gt)
    p, r, f = overlap_metrics(pred, gt)
    print(f"precision {p:.4f}  recall {r:.4f}  fscore {f:.4f}")
    if args.out:
        _write_atomic(args.out, json.dumps({"precision": p, "recall": r, "fscore": f}, sort_keys=True).encode("utf-8"))
        _write_record(os.path.dirname(os.path.abspath(args.out)), "evaluate", RunConfig(), [args.out])
    return EXIT_OK


def _cmd_crossval(args) -> int:
    cfg = _build_config(args)
    manifest = read_manifest(args.manifest)
    os.makedirs(args.out, exist_ok=True)
    curves_dir = os.path.join(args.out, "curves") if args.dump_curves else None
    report = crossval(manifest, cfg, curves_dir=curves_dir)
    report_path = os.path.join(args.out, "report.json")
    table_path = os.path.join(args.out, "report.txt")
    write_report(report, report_path)
    _write_atomic(table_path, format_table(report).encode("utf-8"))
    artifacts = [report_path, table_path]
    if curves_dir:
        artifacts.extend(os.path.join(curves_dir, f) for f in os.listdir(curves_dir))
    _write_record(args.out, "crossval", cfg, artifacts)
    print(format_table(report))
    print(f"aggregate F = {report.aggregate:.2f}%")
    return EXIT_OK


def _cmd_gradcheck(args) -> int:
    from .gradchecks import standard_checks

    worst = 0.0
    for name, err in standard_checks(h=args.step):
        status = "ok" if err <= args.tolerance else "FAIL"
        print(f"{name:<24} max rel err {err:.3e}  {status}")
        worst = max(worst, err)
    return EXIT_OK if worst <= args.tolerance else EXIT_VALIDATION


_HANDLERS = {
    "synth": _cmd_synth,
    "train-encdec": _cmd_train_encdec,
    "train-scorer": _cmd_train_scorer,
    "score": _cmd_score,
    "segment": _cmd_segment,
    "summarize": _cmd_summarize,
    "evaluate": _cmd_evaluate,
    "crossval": _cmd_crossval,
    "gradcheck": _cmd_gradcheck,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _HANDLERS[args.command](args)
    except IoError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (FormatError, ValueError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
