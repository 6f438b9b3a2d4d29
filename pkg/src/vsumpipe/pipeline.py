"""Orchestration shared by the CLI and the cross-validation protocol:
loading + subsampling videos, training per-stream models, scoring, and
turning scores into budgeted summaries."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import RunConfig
from .dataio import DatasetManifest, read_annotations, read_features
from .encdec import EncDec, EncDecConfig, train_encdec
from .kts import Segmentation, max_segment_frames, segment
from .preprocess import BinarizeRule, consolidate_targets, make_windows, subsample
from .scorer import ScorerConfig, ScorerModel, ScoreVector, fuse_streams, score_video, train_scorer
from .selection import binarize_percentile, summarize
from .training import TrainConfig


@dataclass
class VideoData:
    """One video after subsampling to the scoring rate."""

    video_id: str
    category: str | None
    fps: float
    streams: dict  # stream -> (T, D) float32 frames
    targets: np.ndarray  # (T,) uint8 consolidated ground truth

    @property
    def n_frames(self) -> int:
        return self.targets.shape[0]


def binarize_rule(cfg: RunConfig) -> BinarizeRule:
    return BinarizeRule(kind="user_fraction", x=cfg.user_fraction, mark=cfg.user_mark)


def streams_needed(cfg: RunConfig) -> list:
    wanted = ["rgb", "flow"] if cfg.stream == "fused" else [cfg.stream]
    if cfg.kts_stream not in wanted:
        wanted.append(cfg.kts_stream)
    return wanted


def load_videos(manifest: DatasetManifest, cfg: RunConfig) -> list:
    """Read, consolidate targets, and subsample every manifest entry."""
    rule = binarize_rule(cfg)
    videos = []
    for entry in manifest:
        ann = read_annotations(manifest.resolve(entry.path_annotations))
        labels = consolidate_targets(ann, rule).labels
        streams = {}
        targets_sub = None
        for stream in streams_needed(cfg):
            path = entry.path_rgb if stream == "rgb" else entry.path_flow
            if path is None:
                raise ValueError(f"video {entry.video_id!r} has no {stream} stream")
            seq = read_features(manifest.resolve(path))
            if seq.n_frames != ann.n_frames:
                raise ValueError(
                    f"video {entry.video_id!r}: {stream} has {seq.n_frames} frames, annotations {ann.n_frames}"
                )
            sub, targets_sub = subsample(seq, labels, min(cfg.target_fps, seq.fps))
            streams[stream] = sub.frames
        videos.append(VideoData(video_id=entry.video_id, category=entry.category,
                                fps=min(cfg.target_fps, ann.fps), streams=streams,
                                targets=np.asarray(targets_sub, dtype=np.uint8)))
    return videos


def train_config(cfg: RunConfig, purpose_seed_shift: int = 0) -> TrainConfig:
    return TrainConfig(epochs=cfg.epochs, batch_size=cfg.batch, lr=cfg.lr,
                       val_fraction=cfg.val_fraction, seed=cfg.seed + purpose_seed_shift)


@dataclass
class StreamModels:
    scorer: ScorerModel
    encdec: EncDec | None


def fit_encoder(videos: list, stream: str, cfg: RunConfig) -> EncDec:
    """Phase 1: reconstruction-train the encoder-decoder on snippet windows
    pooled over the given videos."""
    w = min(cfg.window_encdec, min(v.streams[stream].shape[0] for v in videos))
    windows = []
    for v in videos:
        frames = v.streams[stream]
        windows.append(make_windows(frames, np.zeros(frames.shape[0]), w, cfg.encdec_stride).windows)
    pooled = np.concatenate(windows)
    enc_cfg = EncDecConfig(in_dim=pooled.shape[2], hidden=cfg.enc_hidden, latent=cfg.latent)
    model, _ = train_encdec(pooled, enc_cfg, train_config(cfg))
    return model


def fit_scorer(videos: list, stream: str, cfg: RunConfig, encoder: EncDec | None) -> StreamModels:
    """Phase 2: train the frame-score regressor on (latent or raw) windows."""
    dataset = []
    for v in videos:
        frames = v.streams[stream].astype(np.float64)
        if cfg.variant == "summarynet":
            assert encoder is not None
            frames = encoder.encode(frames)
        dataset.append((frames, v.targets.astype(np.float64)))
    in_dim = dataset[0][0].shape[1]
    scorer_cfg = ScorerConfig(variant=cfg.variant, in_dim=in_dim, window_len=cfg.window_scoring,
                              mlp_width=cfg.mlp_width, conv_channels=cfg.conv_channels,
                              lstm_hidden=cfg.lstm_hidden, conv_width=cfg.conv_width)
    model, _ = train_scorer(cfg.variant, dataset, train_config(cfg), scorer_cfg, stride=cfg.train_stride)
    return StreamModels(scorer=model, encdec=encoder)


def train_models(videos: list, cfg: RunConfig, encoders: dict | None = None) -> dict:
    """Train one model stack per needed scoring stream."""
    out = {}
    wanted = ["rgb", "flow"] if cfg.stream == "fused" else [cfg.stream]
    for stream in wanted:
        encoder = None
        if cfg.variant == "summarynet":
            encoder = (encoders or {}).get(stream) or fit_encoder(videos, stream, cfg)
        out[stream] = fit_scorer(videos, stream, cfg, encoder)
    return out


def score_streams(models: dict, video: VideoData, cfg: RunConfig) -> ScoreVector:
    per_stream = []
    for stream, sm in models.items():
        frames = video.streams[stream].astype(np.float64)
        if sm.encdec is not None:
            frames = sm.encdec.encode(frames)
        per_stream.append(score_video(sm.scorer, frames, cfg.window_scoring, video_id=video.video_id))
    fused = per_stream[0]
    for sv in per_stream[1:]:
        fused = fuse_streams(fused, sv)
    return fused


def segment_video(video: VideoData, cfg: RunConfig) -> Segmentation:
    from .dataio import FeatureSequence

    seq = FeatureSequence(video_id=video.video_id, stream=cfg.kts_stream, fps=video.fps,
                          frames=video.streams[cfg.kts_stream])
    cap = max_segment_frames(cfg.max_shot_seconds, video.fps)
    gamma = cfg.kts_gamma if cfg.kts_kernel == "rbf" else None
    return segment(seq, kernel=cfg.kts_kernel, penalty_c=cfg.kts_penalty,
                   max_seg_frames=cap, gamma=gamma)


def summarize_video(scores: ScoreVector, seg: Segmentation, cfg: RunConfig) -> tuple:
    """Returns (Summary, percentile mask) - the two output paths."""
    summary = summarize(scores.scores, seg, budget_fraction=cfg.budget)
    mask = binarize_percentile(scores.scores, cfg.percentile)
    return summary, mask
