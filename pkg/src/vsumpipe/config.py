"""Run configuration: every pipeline tunable in one place.

Precedence when assembling from the CLI: built-in defaults, then a JSON
config file (keys match field names), then explicit command-line flags.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, fields, replace

from .errors import FormatError


@dataclass(frozen=True)
class RunConfig:
    # temporal protocol
    target_fps: float = 2.0
    window_scoring: int = 5
    window_encdec: int = 16
    train_stride: int = 1
    encdec_stride: int = 8  # phase-1 windows overlap by half; stride 1 is 8x slower for the same reconstructions
    # training
    epochs: int = 8
    batch: int = 8
    lr: float = 0.001
    val_fraction: float = 0.2
    seed: int = 0
    # model selection
    variant: str = "summarynet"
    stream: str = "fused"  # rgb | flow | fused
    encdec_scope: str = "global"  # global | fold
    # architecture widths
    enc_hidden: int = 1024
    latent: int = 512
    mlp_width: int = 256
    conv_channels: int = 256
    lstm_hidden: int = 128
    conv_width: int = 3
    # ground-truth binarization
    user_fraction: float = 0.5
    user_mark: str = "positive"  # positive | median
    # segmentation
    kts_kernel: str = "linear"  # linear | rbf
    kts_gamma: float = 1.0
    kts_penalty: float = 1.0
    kts_stream: str = "rgb"
    max_shot_seconds: float = 5.0
    # selection & evaluation
    budget: float = 0.15
    percentile: float = 0.85
    eval_mask: str = "knapsack"  # knapsack | percentile
    folds: int = 5
    stratify: bool = False

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**d)

    def override(self, **kwargs) -> "RunConfig":
        return replace(self, **{k: v for k, v in kwargs.items() if v is not None})


def load_config_file(path: str) -> dict:
    from .dataio import _read_json

    doc = _read_json(path)
    if not isinstance(doc, dict):
        raise FormatError(f"{path}: config file must be a JSON object")
    return doc
