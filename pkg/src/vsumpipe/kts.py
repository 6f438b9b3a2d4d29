"""Kernel temporal segmentation: change-point detection by dynamic
programming over intra-segment scatter of a frame-pair Gram matrix."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .dataio import FeatureSequence


@dataclass(frozen=True)
class Segmentation:
    """Partition of [0, T) into half-open intervals at the change points."""

    video_id: str
    n_frames: int
    change_points: tuple  # strictly increasing ints in (0, T)
    fps: float
    max_seg_frames: int | None = None
    objective: float = 0.0  # total intra-segment scatter at the optimum

    def __post_init__(self):
        if self.n_frames < 1:
            raise ValueError("segmentation needs n_frames >= 1")
        cps = tuple(int(c) for c in self.change_points)
        object.__setattr__(self, "change_points", cps)
        if any(not (0 < c < self.n_frames) for c in cps) or any(
            b <= a for a, b in zip(cps, cps[1:])
        ):
            raise ValueError(f"change points must be strictly increasing in (0, {self.n_frames})")
        if self.max_seg_frames is not None:
            if any(b - a > self.max_seg_frames for a, b in self.segments):
                raise ValueError(f"segment exceeds cap of {self.max_seg_frames} frames")

    @property
    def segments(self) -> list:
        bounds = [0, *self.change_points, self.n_frames]
        return [(bounds[i], bounds[i + 1]) for i in range(len(bounds) - 1)]

    @property
    def n_segments(self) -> int:
        return len(self.change_points) + 1


def gram_matrix(seq_or_frames, kernel: str = "linear", gamma: float | None = None) -> np.ndarray:
    """Pairwise frame kernel. linear: K(i,j) = <x_i, x_j>;
    rbf: K(i,j) = exp(-gamma * ||x_i - x_j||^2)."""
    x = seq_or_frames.frames if isinstance(seq_or_frames, FeatureSequence) else np.asarray(seq_or_frames)
    x = x.astype(np.float64)
    if kernel == "linear":
        return x @ x.T
    if kernel == "rbf":
        if gamma is None or gamma <= 0:
            raise ValueError(f"rbf kernel needs gamma > 0, got {gamma}")
        sq = (x**2).sum(axis=1)
        d2 = np.maximum(sq[:, None] + sq[None, :] - 2.0 * (x @ x.T), 0.0)
        return np.exp(-gamma * d2)
    raise ValueError(f"unknown kernel {kernel!r}")


def _l2_normalize(frames: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(frames, axis=1, keepdims=True)
    return frames / np.where(norms > 0, norms, 1.0)


def segment(
    seq: FeatureSequence,
    kernel: str = "linear",
    penalty_c: float = 1.0,
    max_seg_frames: int | None = None,
    max_segments: int | None = None,
    gamma: float | None = None,
    normalize: bool = True,
) -> Segmentation:
    """Optimal penalized segmentation.

    For m segments the cost is (total scatter) + penalty_c * m *
    (log(T/m) + 1); m ranges from ceil(T / max_seg_frames) to max_segments
    (default T) and the cap is enforced inside the recurrence, so the
    result is optimal among capped segmentations. Ties prefer earlier
    boundaries and fewer segments.
    """
    if penalty_c < 0:
        raise ValueError(f"penalty_c must be >= 0, got {penalty_c}")
    t = seq.n_frames
    if max_seg_frames is not None and max_seg_frames < 1:
        raise ValueError(f"max_seg_frames must be >= 1, got {max_seg_frames}")
    frames = seq.frames.astype(np.float64)
    if normalize and kernel == "linear":
        frames = _l2_normalize(frames)
    gram = gram_matrix(frames, kernel=kernel, gamma=gamma)
    cap = max_seg_frames or 0
    m_max = min(max_segments or t, t)
    m_min = math.ceil(t / max_seg_frames) if max_seg_frames else 1
    if m_min > m_max:
        raise ValueError(f"cap {max_seg_frames} needs at least {m_min} segments but max_segments={m_max}")
    scatter = kernels.kts_scatter(gram)
    cost, prev = kernels.kts_dp(scatter, m_max, cap)

    best_m, best_score = 0, np.inf
    for m in range(m_min, m_max + 1):
        j = cost[m, t]
        if not np.isfinite(j):
            continue
        score = j + penalty_c * m * (math.log(t / m) + 1.0)
        if score < best_score:
            best_score, best_m = score, m
    if best_m == 0:
        raise ValueError("no feasible segmentation")

    bounds = []
    cur = t
    for m in range(best_m, 0, -1):
        cur = int(prev[m, cur])
        bounds.append(cur)
    bounds.reverse()
    assert bounds[0] == 0
    return Segmentation(
        video_id=seq.video_id,
        n_frames=t,
        change_points=tuple(bounds[1:]),
        fps=seq.fps,
        max_seg_frames=max_seg_frames,
        objective=float(cost[best_m, t]),
    )


def segment_scatter(gram: np.ndarray, bounds: list) -> float:
    """Total scatter of a segmentation, computed directly from the Gram
    matrix (independent of the DP prefix-sum path; used as an oracle)."""
    total = 0.0
    for a, b in zip(bounds[:-1], bounds[1:]):
        block = gram[a:b, a:b]
        total += float(np.trace(block)) - float(block.sum()) / (b - a)
    return total


def max_segment_frames(cap_seconds: float, fps: float) -> int:
    """Frame cap for shots of at most cap_seconds at the scored rate."""
    if cap_seconds <= 0 or fps <= 0:
        raise ValueError("cap_seconds and fps must be positive")
    return max(1, math.ceil(cap_seconds * fps))


def write_segmentation(seg: Segmentation, path: str, as_json: bool = True) -> None:
    import json

    from .dataio import _write_atomic

    if as_json:
        doc = {
            "video_id": seg.video_id,
            "n_frames": seg.n_frames,
            "fps": seg.fps,
            "max_seg_frames": seg.max_seg_frames,
            "change_points": list(seg.change_points),
        }
        _write_atomic(path, json.dumps(doc).encode("utf-8"))
    else:
        _write_atomic(path, "\n".join(str(c) for c in seg.change_points).encode("utf-8"))


def read_segmentation(path: str) -> Segmentation:
    import json

    from .dataio import _read_json
    from .errors import FormatError

    doc = _read_json(path)
    try:
        return Segmentation(
            video_id=str(doc["video_id"]),
            n_frames=int(doc["n_frames"]),
            change_points=tuple(int(c) for c in doc["change_points"]),
            fps=float(doc["fps"]),
            max_seg_frames=doc.get("max_seg_frames"),
        )
    except (KeyError, TypeError) as exc:
        raise FormatError(f"{path}: malformed segmentation ({exc})") from exc
