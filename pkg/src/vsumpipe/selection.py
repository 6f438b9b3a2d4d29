"""Key-shot selection: interval scoring, exact 0/1 knapsack under the
duration budget, and percentile-based frame masks."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .dataio import _read_json, _write_atomic
from .errors import FormatError, ShapeError
from .kts import Segmentation
from .preprocess import quantile_threshold


@dataclass(frozen=True)
class Summary:
    video_id: str
    n_frames: int
    shots: tuple  # ((start, end), ...) half-open, disjoint, sorted
    budget_frames: int

    @property
    def selected_frames(self) -> int:
        return sum(b - a for a, b in self.shots)

    @property
    def frame_mask(self) -> np.ndarray:
        mask = np.zeros(self.n_frames, dtype=np.uint8)
        for a, b in self.shots:
            mask[a:b] = 1
        return mask

    @property
    def summary_fraction(self) -> float:
        return self.selected_frames / self.n_frames


def interval_scores(scores: np.ndarray, seg: Segmentation) -> np.ndarray:
    """Mean frame score inside each segment."""
    scores = np.asarray(scores, dtype=np.float64)
    if scores.shape[0] != seg.n_frames:
        raise ShapeError(f"scores length {scores.shape[0]} != segmentation frames {seg.n_frames}")
    return np.array([scores[a:b].mean() for a, b in seg.segments])


def knapsack_select(values, weights, capacity: int) -> list:
    """Exact 0/1 knapsack; returns the selected item indices in order.

    Among optimal sets the tie-break prefers skipping an item when taking
    it does not strictly improve the value, which favours the
    lexicographically smallest sorted index list.
    """
    values = np.asarray(values, dtype=np.float64)
    weights = np.asarray(weights, dtype=np.int64)
    if values.shape != weights.shape:
        raise ShapeError(f"values shape {values.shape} != weights shape {weights.shape}")
    if (weights < 1).any():
        raise ValueError("weights must be >= 1")
    if capacity < 0:
        raise ValueError("capacity must be >= 0")
    n = values.shape[0]
    if n == 0 or capacity == 0:
        return []
    dp = kernels.knapsack_table(values, weights, capacity)
    picked = []
    c = capacity
    for i in range(n - 1, -1, -1):
        if dp[i + 1, c] != dp[i, c]:
            picked.append(i)
            c -= int(weights[i])
    picked.reverse()
    return picked


def summarize(scores: np.ndarray, seg: Segmentation, budget_fraction: float = 0.15,
              weight_by_length: bool = False) -> Summary:
    """Budgeted key-shot summary: knapsack over segments with value = mean
    segment score (optionally mean * length) and weight = segment length."""
    if not (0 < budget_fraction <= 1):
        raise ValueError(f"budget_fraction must lie in (0, 1], got {budget_fraction}")
    seg_values = interval_scores(scores, seg)
    seg_lengths = np.array([b - a for a, b in seg.segments], dtype=np.int64)
    if weight_by_length:
        seg_values = seg_values * seg_lengths
    capacity = int(math.floor(budget_fraction * seg.n_frames + 1e-9))
    picked = knapsack_select(seg_values, seg_lengths, capacity)
    shots = tuple(seg.segments[i] for i in picked)
    return Summary(video_id=seg.video_id, n_frames=seg.n_frames, shots=shots, budget_frames=capacity)


def binarize_percentile(scores: np.ndarray, q: float = 0.85) -> np.ndarray:
    """Frame mask of scores in the top (1-q) tail.

    mask = 1 where score >= the value at ascending-sort index floor(q*T),
    so distinct scores select exactly T - floor(q*T) = ceil((1-q)*T)
    frames; ties can only widen the selection.
    """
    if not (0 < q < 1):
        raise ValueError(f"percentile must lie in (0, 1), got {q}")
    scores = np.asarray(scores, dtype=np.float64)
    threshold = quantile_threshold(scores, q)
    return (scores >= threshold).astype(np.uint8)


# ---------------------------------------------------------------------------
# export formats


def write_summary(summary: Summary, path: str) -> None:
    doc = {
        "video_id": summary.video_id,
        "n_frames": summary.n_frames,
        "budget_frames": summary.budget_frames,
        "shots": [[a, b] for a, b in summary.shots],
    }
    _write_atomic(path, json.dumps(doc).encode("utf-8"))


def read_summary(path: str) -> Summary:
    doc = _read_json(path)
    try:
        return Summary(
            video_id=str(doc["video_id"]),
            n_frames=int(doc["n_frames"]),
            shots=tuple((int(a), int(b)) for a, b in doc["shots"]),
            budget_frames=int(doc["budget_frames"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"{path}: malformed summary ({exc})") from exc


def write_mask(mask: np.ndarray, path: str) -> None:
    """Frame mask as one text line of 0/1 characters."""
    _write_atomic(path, "".join("1" if v else "0" for v in np.asarray(mask)).encode("ascii"))


def read_mask(path: str) -> np.ndarray:
    from .dataio import _read_bytes

    text = _read_bytes(path).decode("ascii", errors="replace").strip()
    if not text or any(ch not in "01" for ch in text):
        raise FormatError(f"{path}: mask must be a single line of 0/1 characters")
    return np.frombuffer(text.encode("ascii"), dtype=np.uint8) - ord("0")
