"""Temporal subsampling, ground-truth binarization, and snippet windows."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dataio import AnnotationSet, FeatureSequence


@dataclass(frozen=True)
class BinarizeRule:
    """How multi-user scores collapse into one 0/1 target per frame.

    kind "user_fraction": a user marks a frame when its score is > 0
    ("positive" sub-rule) or >= that user's median score ("median"
    sub-rule, for 1-5 importance ratings); the frame label is 1 when at
    least ceil(x * n_users) users mark it.
    kind "score_percentile": label is 1 when the per-frame mean score is >=
    the sigma-quantile of mean scores.
    """

    kind: str = "user_fraction"
    x: float = 0.5
    mark: str = "positive"  # positive | median
    sigma: float = 0.85


@dataclass(frozen=True)
class BinarizedTargets:
    video_id: str
    labels: np.ndarray  # (T,) of {0,1}
    threshold_used: float
    rule: str


@dataclass(frozen=True)
class SnippetBatch:
    windows: np.ndarray  # (n, W, D) float64
    targets: np.ndarray  # (n,)
    center_indices: np.ndarray  # (n,)
    window_len: int


def subsample(seq: FeatureSequence, targets: np.ndarray | None, target_fps: float):
    """Keep frames at indices round(k * fps / target_fps), deduplicated.

    Returns (subsampled sequence, subsampled targets). Targets may be None.
    """
    if not (0 < target_fps <= seq.fps):
        raise ValueError(f"target_fps must lie in (0, {seq.fps}], got {target_fps}")
    t = seq.n_frames
    ratio = seq.fps / target_fps
    n_keep = int(math.floor((t - 1) / ratio)) + 1
    idx = np.unique(np.round(np.arange(n_keep + 1) * ratio).astype(np.int64))
    idx = idx[idx < t]
    sub = FeatureSequence(video_id=seq.video_id, stream=seq.stream, fps=float(target_fps),
                          frames=seq.frames[idx])
    sub_targets = None if targets is None else np.asarray(targets)[idx]
    return sub, sub_targets


def consolidate_targets(ann: AnnotationSet, rule: BinarizeRule | None = None) -> BinarizedTargets:
    rule = rule or BinarizeRule()
    scores = np.stack(ann.users)  # (n_users, n_frames)
    if rule.kind == "user_fraction":
        if not (0 < rule.x <= 1):
            raise ValueError(f"user fraction must lie in (0, 1], got {rule.x}")
        if rule.mark == "positive":
            marks = scores > 0
        elif rule.mark == "median":
            marks = scores >= np.median(scores, axis=1, keepdims=True)
        else:
            raise ValueError(f"unknown mark sub-rule {rule.mark!r}")
        need = math.ceil(rule.x * ann.n_users)
        labels = (marks.sum(axis=0) >= need).astype(np.uint8)
        threshold = float(need)
    elif rule.kind == "score_percentile":
        if not (0 < rule.sigma < 1):
            raise ValueError(f"sigma must lie in (0, 1), got {rule.sigma}")
        mean = scores.mean(axis=0)
        threshold = float(quantile_threshold(mean, rule.sigma))
        labels = (mean >= threshold).astype(np.uint8)
    else:
        raise ValueError(f"unknown binarize rule {rule.kind!r}")
    return BinarizedTargets(video_id=ann.video_id, labels=labels, threshold_used=threshold, rule=rule.kind)


def quantile_threshold(values: np.ndarray, q: float) -> float:
    """Threshold such that scores >= it form the top ceil((1-q)*n) on
    distinct inputs: the value at ascending-sort index floor(q*n)."""
    values = np.asarray(values, dtype=np.float64)
    n = values.size
    idx = min(int(math.floor(q * n + 1e-9)), n - 1)
    return float(np.sort(values, kind="stable")[idx])


def make_windows(seq_or_frames, targets: np.ndarray, window_len: int, stride: int = 1) -> SnippetBatch:
    """Sliding windows with the target taken from each window's middle frame.

    Edge frames that cannot anchor a full window get no window; with stride
    1 there are T - W + 1 windows and centers cover
    [floor(W/2), T - ceil(W/2)].
    """
    frames = seq_or_frames.frames if isinstance(seq_or_frames, FeatureSequence) else np.asarray(seq_or_frames)
    t = frames.shape[0]
    if window_len > t:
        raise ValueError(f"window_len {window_len} exceeds sequence length {t}")
    if window_len < 1 or stride < 1:
        raise ValueError("window_len and stride must be >= 1")
    targets = np.asarray(targets)
    if targets.shape[0] != t:
        raise ValueError(f"targets length {targets.shape[0]} != frame count {t}")
    starts = np.arange(0, t - window_len + 1, stride)
    centers = starts + window_len // 2
    windows = np.stack([frames[s : s + window_len] for s in starts]).astype(np.float64)
    return SnippetBatch(windows=windows, targets=targets[centers].copy(),
                        center_indices=centers, window_len=window_len)
