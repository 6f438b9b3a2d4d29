"""Loss functions with analytic gradients."""

from __future__ import annotations

import numpy as np

from ..errors import ShapeError

BCE_EPS = 1e-12


def _check(pred: np.ndarray, target: np.ndarray) -> tuple:
    pred = np.asarray(pred, dtype=np.float64)
    target = np.asarray(target, dtype=np.float64)
    if pred.size != target.size:
        raise ShapeError(f"prediction size {pred.size} != target size {target.size}")
    return pred, target.reshape(pred.shape)


def bce_loss(pred: np.ndarray, target: np.ndarray) -> float:
    """Mean binary cross-entropy; predictions clamped to [eps, 1-eps]."""
    pred, target = _check(pred, target)
    p = np.clip(pred, BCE_EPS, 1.0 - BCE_EPS)
    return float(np.mean(-(target * np.log(p) + (1.0 - target) * np.log1p(-p))))


def bce_loss_grad(pred: np.ndarray, target: np.ndarray) -> tuple:
    """Returns (loss, dloss/dpred); gradient is zero where the clamp binds."""
    pred, target = _check(pred, target)
    p = np.clip(pred, BCE_EPS, 1.0 - BCE_EPS)
    loss = float(np.mean(-(target * np.log(p) + (1.0 - target) * np.log1p(-p))))
    grad = (-target / p + (1.0 - target) / (1.0 - p)) / pred.size
    grad = np.where((pred > BCE_EPS) & (pred < 1.0 - BCE_EPS), grad, 0.0)
    return loss, grad


def mse_loss(pred: np.ndarray, target: np.ndarray) -> float:
    pred, target = _check(pred, target)
    return float(np.mean((pred - target) ** 2))


def mse_loss_grad(pred: np.ndarray, target: np.ndarray) -> tuple:
    pred, target = _check(pred, target)
    diff = pred - target
    return float(np.mean(diff**2)), 2.0 * diff / pred.size
