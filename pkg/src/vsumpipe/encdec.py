"""Offline encoder-decoder: compresses per-frame features to latent codes
that feed the summarynet regressor (reconstruction-trained, MSE)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataio import LayerSpec, ModelBundle
from .rng import numpy_rng
from .tensornet import Network, build_layer
from .training import TrainConfig, run_training


@dataclass(frozen=True)
class EncDecConfig:
    in_dim: int
    hidden: int = 1024
    latent: int = 512
    conv_width: int = 3
    activation: str = "relu"  # hidden activations; output layer is linear


def _specs(cfg: EncDecConfig) -> list:
    act = cfg.activation
    return [
        LayerSpec("dense", cfg.in_dim, cfg.hidden, activation=act, group="encdec"),
        LayerSpec("dense", cfg.hidden, cfg.latent, activation=act, group="encdec"),
        LayerSpec("conv1d", cfg.latent, cfg.latent, kernel_width=cfg.conv_width, activation=act, group="encdec"),
        LayerSpec("dense", cfg.latent, cfg.hidden, activation=act, group="encdec"),
        LayerSpec("dense", cfg.hidden, cfg.in_dim, activation="linear", group="encdec"),
    ]


class EncDec:
    """Encoder (dense, dense, temporal conv) + decoder (dense, dense).

    The first three layers are the encoder; ``encode`` runs only those and
    yields one latent vector per frame.
    """

    n_encoder_layers = 3

    def __init__(self, cfg: EncDecConfig, seed: int = 0):
        self.cfg = cfg
        self.seed = seed
        rng = numpy_rng(seed, "init", "encdec")
        self.network = Network(
            [build_layer(s, rng, name=f"encdec.l{i}") for i, s in enumerate(_specs(cfg))]
        )
        self.train_meta: dict = {}

    @property
    def latent_dim(self) -> int:
        return self.cfg.latent

    def encode(self, frames: np.ndarray) -> np.ndarray:
        """Per-frame latent codes for a (T, D) or (B, T, D) array."""
        x = np.asarray(frames, dtype=np.float64)
        squeeze = x.ndim == 2
        if squeeze:
            x = x[None]
        for layer in self.network.layers[: self.n_encoder_layers]:
            x = layer.forward(x)
        return x[0] if squeeze else x

    def reconstruct(self, windows: np.ndarray) -> np.ndarray:
        return self.network.forward(np.asarray(windows, dtype=np.float64))

    def specs(self) -> list:
        return _specs(self.cfg)

    def weights(self, prefix: str = "") -> dict:
        return {prefix + k: v.copy() for k, v in self.network.params().items()}

    def load_weights(self, weights: dict, prefix: str = "") -> None:
        self.network.load_params(weights, prefix=prefix)


def train_encdec(windows: np.ndarray, cfg: EncDecConfig | None = None,
                 train_cfg: TrainConfig | None = None) -> tuple:
    """Train on (n, W, D) snippet windows to reconstruct them; returns
    (model, result) with the model at its best validation epoch."""
    windows = np.asarray(windows, dtype=np.float64)
    if windows.ndim != 3 or windows.shape[0] == 0:
        raise ValueError("need a nonempty (n, W, D) window array")
    cfg = cfg or EncDecConfig(in_dim=windows.shape[2])
    if cfg.in_dim != windows.shape[2]:
        raise ValueError(f"config in_dim {cfg.in_dim} != window feature dim {windows.shape[2]}")
    train_cfg = train_cfg or TrainConfig()
    model = EncDec(cfg, seed=train_cfg.seed)
    result = run_training(model.network, windows, windows, "mse", train_cfg, purpose="encdec")
    model.train_meta = result.meta(train_cfg.seed)
    return model, result


def encdec_to_bundle(model: EncDec, stream: str, variant: str = "summarynet") -> ModelBundle:
    return ModelBundle(variant=variant, stream=stream, layer_specs=model.specs(),
                       weights=model.weights(), train_meta=model.train_meta)


def encdec_from_bundle(bundle: ModelBundle) -> EncDec:
    specs = [s for s in bundle.layer_specs if s.group == "encdec"]
    if len(specs) != 5:
        raise ValueError(f"bundle has {len(specs)} encoder-decoder layers, expected 5")
    cfg = EncDecConfig(in_dim=specs[0].in_dim, hidden=specs[0].out_dim,
                       latent=specs[1].out_dim, conv_width=specs[2].kernel_width,
                       activation=specs[0].activation)
    model = EncDec(cfg, seed=int(bundle.train_meta.get("seed", 0) or 0))
    model.load_weights(bundle.weights)
    model.train_meta = dict(bundle.train_meta)
    return model
