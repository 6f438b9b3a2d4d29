"""Temporal-overlap metrics, report assembly, and k-fold cross-validation."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .config import RunConfig
from .dataio import DatasetManifest, _read_json, _write_atomic
from .errors import FormatError, ShapeError
from .pipeline import (
    fit_encoder,
    load_videos,
    score_streams,
    segment_video,
    summarize_video,
    train_models,
)
from .rng import SplitMix64, subseed


def overlap_metrics(pred_mask: np.ndarray, gt_mask: np.ndarray) -> tuple:
    """(precision, recall, fscore) in percent.

    precision = overlap / |pred|, recall = overlap / |gt| (0 when the
    denominator is 0); fscore = 2 p r / (p + r), again 0 when p + r = 0.
    """
    pred = np.asarray(pred_mask)
    gt = np.asarray(gt_mask)
    if pred.shape != gt.shape or pred.ndim != 1:
        raise ShapeError(f"mask shapes differ: {pred.shape} vs {gt.shape}")
    if not (np.isin(pred, (0, 1)).all() and np.isin(gt, (0, 1)).all()):
        raise ValueError("masks must be binary")
    overlap = float(np.minimum(pred, gt).sum())
    n_pred = float(pred.sum())
    n_gt = float(gt.sum())
    precision = overlap / n_pred if n_pred else 0.0
    recall = overlap / n_gt if n_gt else 0.0
    fscore = 2.0 * precision * recall / (precision + recall) if precision + recall else 0.0
    return precision * 100.0, recall * 100.0, fscore * 100.0


@dataclass
class EvalReport:
    per_video: list  # dicts: video_id, precision, recall, fscore, summary_fraction
    aggregate: float  # mean fscore in percent
    fold_assignments: dict  # video_id -> fold index
    config: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "aggregate_fscore": self.aggregate,
            "per_video": self.per_video,
            "fold_assignments": self.fold_assignments,
            "config": self.config,
        }


def assign_folds(videos: list, folds: int, seed: int, stratify: bool) -> dict:
    """Deterministic fold assignment keyed by video_id.

    Stratified mode deals each category's videos to distinct folds (round
    robin over a seeded fold order), so a test fold sees at most one video
    of any category; it fails when a category has more videos than folds.
    """
    if folds < 2:
        raise ValueError("need at least 2 folds")
    if len(videos) < folds:
        raise ValueError(f"{len(videos)} videos cannot fill {folds} folds")
    ids = sorted(v.video_id for v in videos)
    rng = SplitMix64(subseed(seed, "folds"))
    assignment = {}
    if not stratify:
        order = list(ids)
        rng.shuffle(order)
        for i, vid in enumerate(order):
            assignment[vid] = i % folds
        return assignment
    by_cat = {}
    cat_of = {v.video_id: (v.category or v.video_id) for v in videos}
    for vid in ids:
        by_cat.setdefault(cat_of[vid], []).append(vid)
    fold_loads = [0] * folds
    for cat in sorted(by_cat):
        members = list(by_cat[cat])
        if len(members) > folds:
            raise ValueError(f"category {cat!r} has {len(members)} videos but only {folds} folds")
        rng.shuffle(members)
        # least-loaded folds first; ties broken by a seeded rotation
        rot = rng.randrange(folds)
        fold_order = sorted(range(folds), key=lambda f: (fold_loads[f], (f + rot) % folds))
        for vid, f in zip(members, fold_order):
            assignment[vid] = f
            fold_loads[f] += 1
    return assignment


def crossval(manifest: DatasetManifest, cfg: RunConfig | None = None,
             curves_dir: str | None = None) -> EvalReport:
    """k-fold protocol: per fold, train on the other folds' videos, score
    the fold's videos, segment, summarize under the budget, and measure
    overlap against the consolidated ground truth.

    With curves_dir set, each test video's (score, ground truth) pairs are
    dumped as two-column text for plotting."""
    cfg = cfg or RunConfig()
    # canonical video order keeps training batches (and so the report)
    # invariant under manifest reordering
    videos = sorted(load_videos(manifest, cfg), key=lambda v: v.video_id)
    assignment = assign_folds(videos, cfg.folds, cfg.seed, cfg.stratify)
    by_id = {v.video_id: v for v in videos}

    global_encoders = {}
    if cfg.variant == "summarynet" and cfg.encdec_scope == "global":
        wanted = ["rgb", "flow"] if cfg.stream == "fused" else [cfg.stream]
        for stream in wanted:
            global_encoders[stream] = fit_encoder(videos, stream, cfg)

    results = {}
    for fold in range(cfg.folds):
        train_videos = [v for v in videos if assignment[v.video_id] != fold]
        test_ids = sorted(vid for vid, f in assignment.items() if f == fold)
        if not train_videos or not test_ids:
            continue
        models = train_models(train_videos, cfg, encoders=global_encoders or None)
        for vid in test_ids:
            video = by_id[vid]
            scores = score_streams(models, video, cfg)
            if curves_dir is not None:
                import os

                os.makedirs(curves_dir, exist_ok=True)
                write_curves(vid, scores.scores, video.targets, os.path.join(curves_dir, f"{vid}.txt"))
            seg = segment_video(video, cfg)
            summary, pct_mask = summarize_video(scores, seg, cfg)
            pred = summary.frame_mask if cfg.eval_mask == "knapsack" else pct_mask
            p, r, f = overlap_metrics(pred, video.targets)
            results[vid] = {
                "video_id": vid,
                "precision": p,
                "recall": r,
                "fscore": f,
                "summary_fraction": summary.summary_fraction,
                "n_frames": video.n_frames,
                "selected_frames": summary.selected_frames,
                "budget_frames": summary.budget_frames,
            }

    per_video = [results[vid] for vid in sorted(results)]
    aggregate = float(np.mean([r["fscore"] for r in per_video])) if per_video else 0.0
    return EvalReport(per_video=per_video, aggregate=aggregate,
                      fold_assignments=dict(sorted(assignment.items())), config=cfg.to_dict())


# ---------------------------------------------------------------------------
# report output


def write_report(report: EvalReport, path: str) -> None:
    _write_atomic(path, json.dumps(report.to_dict(), sort_keys=True).encode("utf-8"))


def read_report(path: str) -> EvalReport:
    doc = _read_json(path)
    try:
        return EvalReport(per_video=doc["per_video"], aggregate=doc["aggregate_fscore"],
                          fold_assignments=doc["fold_assignments"], config=doc.get("config", {}))
    except (KeyError, TypeError) as exc:
        raise FormatError(f"{path}: malformed report ({exc})") from exc


def format_table(report: EvalReport) -> str:
    header = f"{'video':<12} {'fold':>4} {'prec%':>8} {'rec%':>8} {'F%':>8} {'len%':>6}"
    lines = [header, "-" * len(header)]
    for row in report.per_video:
        fold = report.fold_assignments.get(row["video_id"], -1)
        lines.append(
            f"{row['video_id']:<12} {fold:>4} {row['precision']:>8.2f} {row['recall']:>8.2f} "
            f"{row['fscore']:>8.2f} {100 * row['summary_fraction']:>6.2f}"
        )
    lines.append("-" * len(header))
    lines.append(f"{'mean F':<12} {'':>4} {'':>8} {'':>8} {report.aggregate:>8.2f}")
    return "\n".join(lines)


def write_curves(video_id: str, scores: np.ndarray, gt: np.ndarray, path: str) -> None:
    """Two-column dump (score, ground truth) per frame, for plotting."""
    lines = "\n".join(f"{float(s)!r} {int(g)}" for s, g in zip(scores, gt))
    _write_atomic(path, lines.encode("ascii"))
