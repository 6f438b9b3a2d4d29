"""Frame-score models and scoring.

Variants: baseline (per-frame MLP), convnet (temporal convs + MLP),
convlstm (BiLSTM + convs + MLP on raw features), summarynet (same stack fed
encoder latents). All end in a single sigmoid unit read at the window's
middle frame.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .dataio import LayerSpec, ModelBundle, _read_json, _write_atomic
from .errors import FormatError, IdMismatchError, ShapeError
from .preprocess import BinarizedTargets, make_windows
from .rng import numpy_rng
from .tensornet import Network, TimeSlice, build_layer
from .training import TrainConfig, run_training

VARIANT_USES_LSTM = {"baseline": False, "convnet": False, "convlstm": True, "summarynet": True}


@dataclass(frozen=True)
class ScorerConfig:
    variant: str
    in_dim: int
    window_len: int = 5
    mlp_width: int = 256
    conv_channels: int = 256
    lstm_hidden: int = 128  # per direction
    conv_width: int = 3


@dataclass(frozen=True)
class ScoreVector:
    """Per-frame scores in [0, 1]; frames outside `coverage` (inclusive
    first/last scorable index) carry the fill value 0.0."""

    video_id: str
    scores: np.ndarray
    coverage: tuple  # (first, last)

    def __post_init__(self):
        scores = np.asarray(self.scores, dtype=np.float64)
        if scores.ndim != 1:
            raise ShapeError("scores must be a vector")
        if scores.size and (scores.min() < 0.0 or scores.max() > 1.0):
            raise ValueError("scores must lie in [0, 1]")
        object.__setattr__(self, "scores", scores)

    @property
    def n_frames(self) -> int:
        return self.scores.shape[0]


def _scorer_specs(cfg: ScorerConfig) -> list:
    mlp, ch, k = cfg.mlp_width, cfg.conv_channels, cfg.conv_width
    specs = []
    if cfg.variant == "baseline":
        specs = [
            LayerSpec("dense", cfg.in_dim, mlp, activation="sigmoid"),
            LayerSpec("dense", mlp, mlp, activation="sigmoid"),
        ]
        head_in = mlp
    elif cfg.variant in ("summarynet", "convlstm"):
        specs = [
            LayerSpec("lstm", cfg.in_dim, 2 * cfg.lstm_hidden, bidirectional=True),
            LayerSpec("conv1d", 2 * cfg.lstm_hidden, ch, kernel_width=k, activation="relu"),
            LayerSpec("dense", ch, mlp, activation="sigmoid"),
            LayerSpec("dense", mlp, mlp, activation="sigmoid"),
            LayerSpec("conv1d", mlp, ch, kernel_width=k, activation="relu"),
        ]
        head_in = ch
    elif cfg.variant == "convnet":
        specs = [
            LayerSpec("conv1d", cfg.in_dim, ch, kernel_width=k, activation="relu"),
            LayerSpec("dense", ch, mlp, activation="sigmoid"),
            LayerSpec("dense", mlp, mlp, activation="sigmoid"),
            LayerSpec("conv1d", mlp, ch, kernel_width=k, activation="relu"),
        ]
        head_in = ch
    else:
        raise ValueError(f"unknown variant {cfg.variant!r}")
    specs.append(LayerSpec("dense", head_in, 1, activation="sigmoid"))
    return specs


class ScorerModel:
    """Layer stack with a middle-frame slice before the sigmoid head."""

    def __init__(self, cfg: ScorerConfig, seed: int = 0):
        self.cfg = cfg
        self.seed = seed
        rng = numpy_rng(seed, "init", "scorer", cfg.variant)
        specs = _scorer_specs(cfg)
        layers = [build_layer(s, rng, name=f"scorer.l{i}") for i, s in enumerate(specs)]
        layers.insert(len(layers) - 1, TimeSlice())
        self.network = Network(layers)
        self.train_meta: dict = {}

    @property
    def variant(self) -> str:
        return self.cfg.variant

    def predict(self, windows: np.ndarray, batch_size: int = 256) -> np.ndarray:
        """Middle-frame probability per window; chunked so a run is
        independent of how callers batch (trailing 1-window chunks are
        merged into the previous chunk to keep BLAS paths identical)."""
        windows = np.asarray(windows, dtype=np.float64)
        n = windows.shape[0]
        bounds = list(range(0, n, batch_size)) + [n]
        if len(bounds) > 2 and bounds[-1] - bounds[-2] == 1:
            del bounds[-2]
        out = [self.network.forward(windows[a:b]).reshape(-1) for a, b in zip(bounds[:-1], bounds[1:])]
        return np.concatenate(out)

    def specs(self) -> list:
        return _scorer_specs(self.cfg)

    def weights(self, prefix: str = "") -> dict:
        return {prefix + k: v.copy() for k, v in self.network.params().items()}

    def load_weights(self, weights: dict, prefix: str = "") -> None:
        self.network.load_params(weights, prefix=prefix)


def train_scorer(variant: str, dataset: list, train_cfg: TrainConfig | None = None,
                 cfg: ScorerConfig | None = None, stride: int = 1) -> tuple:
    """Train a variant on (features-or-latents, targets) pairs.

    Each dataset item is (FeatureSequence | (T, D) array, BinarizedTargets |
    (T,) vector). Windows of cfg.window_len at the given stride are pooled
    across videos; returns (model, result) at the best validation epoch.
    """
    if not dataset:
        raise ValueError("empty dataset")
    train_cfg = train_cfg or TrainConfig()
    all_windows, all_targets = [], []
    for frames, targets in dataset:
        labels = targets.labels if isinstance(targets, BinarizedTargets) else np.asarray(targets)
        cfg = cfg or ScorerConfig(variant=variant, in_dim=np.asarray(
            frames.frames if hasattr(frames, "frames") else frames).shape[1])
        batch = make_windows(frames, labels, cfg.window_len, stride)
        all_windows.append(batch.windows)
        all_targets.append(batch.targets)
    windows = np.concatenate(all_windows)
    targets = np.concatenate(all_targets).astype(np.float64)
    if cfg.variant != variant:
        raise ValueError(f"config variant {cfg.variant!r} != requested {variant!r}")
    model = ScorerModel(cfg, seed=train_cfg.seed)
    result = run_training(model.network, windows, targets, "bce", train_cfg, purpose=f"scorer.{variant}")
    model.train_meta = result.meta(train_cfg.seed)
    return model, result


def score_video(model: ScorerModel, frames, window_len: int | None = None,
                stride: int = 1, video_id: str | None = None) -> ScoreVector:
    """Slide a window over the sequence and place each prediction at the
    window's middle frame; uncovered edge frames score 0.0."""
    arr = np.asarray(frames.frames if hasattr(frames, "frames") else frames, dtype=np.float64)
    w = window_len or model.cfg.window_len
    t = arr.shape[0]
    if t < w:
        raise ValueError(f"sequence of {t} frames is shorter than window {w}")
    batch = make_windows(arr, np.zeros(t), w, stride)
    preds = model.predict(batch.windows)
    scores = np.zeros(t)
    scores[batch.center_indices] = preds
    vid = video_id or getattr(frames, "video_id", "")
    return ScoreVector(video_id=vid, scores=scores,
                       coverage=(int(batch.center_indices[0]), int(batch.center_indices[-1])))


def fuse_streams(a: ScoreVector, b: ScoreVector) -> ScoreVector:
    """Element-wise mean of two per-stream score vectors."""
    if a.video_id != b.video_id:
        raise IdMismatchError(f"cannot fuse {a.video_id!r} with {b.video_id!r}")
    if a.n_frames != b.n_frames:
        raise ShapeError(f"length mismatch {a.n_frames} != {b.n_frames}")
    cov = (min(a.coverage[0], b.coverage[0]), max(a.coverage[1], b.coverage[1]))
    return ScoreVector(video_id=a.video_id, scores=(a.scores + b.scores) / 2.0, coverage=cov)


# ---------------------------------------------------------------------------
# bundles and export


def scorer_to_bundle(model: ScorerModel, stream: str, encdec_model=None) -> ModelBundle:
    specs = list(model.specs())
    weights = model.weights()
    meta = dict(model.train_meta)
    meta["window_len"] = model.cfg.window_len
    if encdec_model is not None:
        specs = encdec_model.specs() + specs
        weights.update(encdec_model.weights())
        meta["encdec"] = dict(encdec_model.train_meta)
    return ModelBundle(variant=model.variant, stream=stream, layer_specs=specs,
                       weights=weights, train_meta=meta)


def scorer_from_bundle(bundle: ModelBundle) -> tuple:
    """Returns (ScorerModel, EncDec | None)."""
    from .encdec import encdec_from_bundle

    specs = [s for s in bundle.layer_specs if s.group == "scorer"]
    if not specs:
        raise ValueError("bundle has no scorer layers")
    first, head = specs[0], specs[-1]
    lstm = next((s for s in specs if s.kind == "lstm"), None)
    conv = next((s for s in specs if s.kind == "conv1d"), None)
    mlp = next(s for s in specs if s.kind == "dense" and s.out_dim > 1)
    cfg = ScorerConfig(
        variant=bundle.variant,
        in_dim=first.in_dim,
        window_len=int(bundle.train_meta.get("window_len", 5)),
        mlp_width=mlp.out_dim,
        conv_channels=conv.out_dim if conv else 256,
        lstm_hidden=lstm.out_dim // 2 if lstm else 128,
        conv_width=conv.kernel_width if conv else 3,
    )
    model = ScorerModel(cfg, seed=int(bundle.train_meta.get("seed", 0) or 0))
    model.load_weights(bundle.weights)
    model.train_meta = dict(bundle.train_meta)
    enc = None
    if any(s.group == "encdec" for s in bundle.layer_specs):
        enc = encdec_from_bundle(bundle)
    return model, enc


def write_scores(sv: ScoreVector, path: str, as_json: bool = True) -> None:
    if as_json:
        doc = {"video_id": sv.video_id, "coverage": list(sv.coverage), "scores": sv.scores.tolist()}
        _write_atomic(path, json.dumps(doc).encode("utf-8"))
    else:
        lines = "\n".join(f"{i} {s!r}" for i, s in enumerate(sv.scores.tolist()))
        _write_atomic(path, lines.encode("ascii"))


def read_scores(path: str) -> ScoreVector:
    doc = _read_json(path)
    try:
        return ScoreVector(video_id=str(doc["video_id"]),
                           scores=np.asarray(doc["scores"], dtype=np.float64),
                           coverage=tuple(doc["coverage"]))
    except (KeyError, TypeError) as exc:
        raise FormatError(f"{path}: malformed score file ({exc})") from exc
