"""Shared minibatch training loop: seeded shuffling, Adam, best-epoch
selection on validation loss."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .rng import SplitMix64, subseed
from .tensornet import Adam, Network, bce_loss, bce_loss_grad, mse_loss, mse_loss_grad

_LOSSES = {"bce": (bce_loss, bce_loss_grad), "mse": (mse_loss, mse_loss_grad)}


@dataclass
class TrainConfig:
    epochs: int = 8
    batch_size: int = 8
    lr: float = 0.001
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    val_fraction: float = 0.2
    seed: int = 0


@dataclass
class TrainResult:
    epochs_run: int
    best_epoch: int
    best_val_loss: float | None
    train_history: list = field(default_factory=list)
    val_history: list = field(default_factory=list)

    def meta(self, seed: int) -> dict:
        return {"epochs_run": self.epochs_run, "best_val_loss": self.best_val_loss, "seed": seed}


def split_train_val(n: int, val_fraction: float, seed: int) -> tuple:
    """Deterministic index split. val_fraction 0 validates on the training
    set itself (degenerate split for smoke tests)."""
    if not (0 <= val_fraction < 1):
        raise ValueError(f"val_fraction must lie in [0, 1), got {val_fraction}")
    order = SplitMix64(subseed(seed, "split")).permutation(n)
    n_val = int(round(val_fraction * n))
    if val_fraction > 0 and n_val == 0 and n > 1:
        n_val = 1
    val = np.sort(order[:n_val])
    train = np.sort(order[n_val:])
    if train.size == 0:
        raise ValueError("empty training split")
    if val.size == 0:
        val = train
    return train, val


def run_training(network: Network, inputs: np.ndarray, targets: np.ndarray,
                 loss: str, cfg: TrainConfig, *, purpose: str) -> TrainResult:
    """Train `network` in place; afterwards its parameters are those of the
    epoch with the lowest validation loss."""
    if inputs.shape[0] == 0:
        raise ValueError("empty training input")
    if cfg.epochs < 0 or cfg.batch_size < 1:
        raise ValueError("epochs must be >= 0 and batch_size >= 1")
    loss_only, loss_grad = _LOSSES[loss]
    train_idx, val_idx = split_train_val(inputs.shape[0], cfg.val_fraction, subseed(cfg.seed, purpose))
    if cfg.epochs == 0:
        return TrainResult(epochs_run=0, best_epoch=-1, best_val_loss=None)

    adam = Adam(network.params(), lr=cfg.lr, beta1=cfg.beta1, beta2=cfg.beta2, epsilon=cfg.epsilon)
    best_val = np.inf
    best_epoch = -1
    best_params = network.snapshot()
    train_hist, val_hist = [], []
    for epoch in range(cfg.epochs):
        order = train_idx.copy()
        SplitMix64(subseed(cfg.seed, purpose, "shuffle", epoch)).shuffle(order_list := list(order))
        order = np.asarray(order_list)
        epoch_losses = []
        for start in range(0, order.size, cfg.batch_size):
            batch = order[start : start + cfg.batch_size]
            out = network.forward(inputs[batch])
            value, dpred = loss_grad(out, targets[batch])
            network.backward(dpred)  # backward assigns, no zeroing needed
            adam.step(network.grads())
            epoch_losses.append(value * batch.size)
        train_hist.append(sum(epoch_losses) / order.size)
        val_loss = evaluate_loss(network, inputs[val_idx], targets[val_idx], loss_only)
        val_hist.append(val_loss)
        if val_loss < best_val:
            best_val = val_loss
            best_epoch = epoch
            best_params = network.snapshot()
    network.load_params(best_params)
    return TrainResult(epochs_run=cfg.epochs, best_epoch=best_epoch, best_val_loss=float(best_val),
                       train_history=train_hist, val_history=val_hist)


def evaluate_loss(network: Network, inputs: np.ndarray, targets: np.ndarray,
                  loss_only, batch_size: int = 256) -> float:
    total = 0.0
    n = inputs.shape[0]
    for start in range(0, n, batch_size):
        out = network.forward(inputs[start : start + batch_size])
        total += loss_only(out, targets[start : start + batch_size]) * min(batch_size, n - start)
    return total / n
