"""Synthetic dataset generator with planted ground truth.

Videos are piecewise-constant in feature space: each segment has a random
prototype, plus Gaussian frame noise. A subset of segments covering about
`summary_fraction` of the duration is planted as the summary; those
segments' prototypes are shifted along one fixed marker direction (shared
across videos and streams) so the scorer has something to learn. The
noise is anisotropic: `feature_noise` acts along the marker (setting the
per-frame detection difficulty) and a sixth of it per dimension acts as
isotropic background (weak enough that segment structure stays visible to
the kernel segmenter). Prototypes are orthogonal to the marker, so the
shift is the only between-class signal. Users mark the planted frames
with independent per-frame flip noise.
"""

from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass

import numpy as np

from .dataio import (
    AnnotationSet,
    DatasetManifest,
    FeatureSequence,
    ManifestEntry,
    _write_atomic,
    write_annotations,
    write_features,
    write_manifest,
)
from .rng import numpy_rng


@dataclass(frozen=True)
class SynthSpec:
    n_videos: int = 10
    t_range: tuple = (300, 600)
    dim: int = 64
    n_segments_range: tuple = (8, 14)
    summary_fraction: float = 0.15
    n_users: int = 5
    user_noise: float = 0.1
    feature_noise: float = 0.6
    marker_strength: float = 1.0
    prototype_scale: float = 1.0
    fps: float = 4.0
    n_categories: int = 5
    seed: int = 0

    def __post_init__(self):
        if not (0 < self.summary_fraction < 1):
            raise ValueError("summary_fraction must lie in (0, 1)")
        if self.user_noise < 0 or self.feature_noise < 0:
            raise ValueError("noise levels must be >= 0")
        if self.n_videos < 1 or self.dim < 1 or self.n_users < 1:
            raise ValueError("n_videos, dim, and n_users must be >= 1")


def _split(rng: np.random.Generator, total: int, parts: int, min_len: int) -> list:
    spare = total - parts * min_len
    if spare < 0:
        raise ValueError(f"cannot split {total} frames into {parts} segments of >= {min_len}")
    weights = rng.random(parts) + 1.0
    extra = np.floor(weights / weights.sum() * spare).astype(int)
    extra[0] += spare - int(extra.sum())
    return (min_len + extra).tolist()


def _segment_layout(rng: np.random.Generator, t: int, n_segments: int, fraction: float) -> tuple:
    """Segment lengths plus the planted summary indices.

    The planted duration is fixed to round(fraction * t) first and split
    into a proportional number of segments, so the knapsack budget can
    cover the plant almost exactly.
    """
    target = max(1, round(fraction * t))
    k = min(n_segments - 1, max(1, round(n_segments * fraction)))
    min_len = max(3, min(t // (3 * n_segments), target // (2 * k)))
    summary_lengths = _split(rng, target, k, min_len)
    other_lengths = _split(rng, t - target, n_segments - k, min_len)
    positions = sorted(rng.choice(n_segments, size=k, replace=False).tolist())
    lengths = []
    si, oi = 0, 0
    for pos in range(n_segments):
        if pos in positions:
            lengths.append(summary_lengths[si])
            si += 1
        else:
            lengths.append(other_lengths[oi])
            oi += 1
    return lengths, positions


def generate(spec: SynthSpec, out_dir: str) -> tuple:
    """Write FSEQ1 + annotation + manifest + truth files; returns
    (DatasetManifest, truth dict)."""
    for sub in ("rgb", "flow", "ann"):
        os.makedirs(os.path.join(out_dir, sub), exist_ok=True)
    marker = numpy_rng(spec.seed, "marker").standard_normal(spec.dim)
    marker /= np.linalg.norm(marker)

    entries, truth_videos = [], []
    for vi in range(spec.n_videos):
        video_id = f"vid{vi:03d}"
        rng = numpy_rng(spec.seed, "video", vi)
        t = int(rng.integers(spec.t_range[0], spec.t_range[1] + 1))
        n_segments = int(rng.integers(spec.n_segments_range[0], spec.n_segments_range[1] + 1))
        lengths, summary_segs = _segment_layout(rng, t, n_segments, spec.summary_fraction)
        bounds = np.cumsum([0] + lengths)
        mask = np.zeros(t, dtype=np.uint8)
        for si in summary_segs:
            mask[bounds[si] : bounds[si + 1]] = 1

        paths = {}
        for stream in ("rgb", "flow"):
            srng = numpy_rng(spec.seed, "video", vi, stream)
            protos = srng.standard_normal((n_segments, spec.dim))
            # prototypes orthogonal to the marker direction: the shift is
            # the only between-class signal, not confounded by prototype
            # components along it
            protos -= np.outer(protos @ marker, marker)
            protos *= spec.prototype_scale / np.linalg.norm(protos, axis=1, keepdims=True)
            protos[summary_segs] += spec.marker_strength * marker
            frames = np.repeat(protos, lengths, axis=0)
            frames = frames + spec.feature_noise * np.outer(srng.standard_normal(t), marker)
            frames = frames + (spec.feature_noise / 6.0) * srng.standard_normal((t, spec.dim))
            if stream == "flow":
                lo, hi = frames.min(), frames.max()
                frames = np.zeros_like(frames) if hi == lo else (frames - lo) / (hi - lo)
            path = os.path.join(stream, f"{video_id}.fseq")
            write_features(
                FeatureSequence(video_id=video_id, stream=stream, fps=spec.fps,
                                frames=frames.astype(np.float32)),
                os.path.join(out_dir, path),
            )
            paths[stream] = path

        urng = numpy_rng(spec.seed, "video", vi, "users")
        users = []
        for _ in range(spec.n_users):
            flips = urng.random(t) < spec.user_noise
            users.append(np.where(flips, 1 - mask, mask).astype(np.float64))
        ann_path = os.path.join("ann", f"{video_id}.json")
        write_annotations(
            AnnotationSet(video_id=video_id, fps=spec.fps, n_frames=t, users=tuple(users)),
            os.path.join(out_dir, ann_path),
        )

        entries.append(ManifestEntry(video_id=video_id, path_rgb=paths["rgb"],
                                     path_flow=paths["flow"], path_annotations=ann_path,
                                     category=f"c{vi % spec.n_categories}"))
        truth_videos.append({
            "video_id": video_id,
            "n_frames": t,
            "fps": spec.fps,
            "boundaries": [int(b) for b in bounds[1:-1]],
            "summary_segments": summary_segs,
            "mask": "".join(str(int(v)) for v in mask),
        })

    manifest = DatasetManifest(entries=tuple(entries), root=os.path.abspath(out_dir))
    write_manifest(manifest, os.path.join(out_dir, "manifest.json"))
    truth = {"spec": asdict(spec), "videos": truth_videos}
    _write_atomic(os.path.join(out_dir, "truth.json"), json.dumps(truth).encode("utf-8"))
    return manifest, truth
