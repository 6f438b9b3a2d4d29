"""Central-difference verification of the analytic gradients."""

from __future__ import annotations

import numpy as np

from .losses import bce_loss, bce_loss_grad, mse_loss, mse_loss_grad


def check_gradients(network, x: np.ndarray, target: np.ndarray,
                    loss: str = "bce", h: float = 1e-5) -> float:
    """Max over parameters of |g_analytic - g_fd| / max(|g_a| + |g_fd|, 1e-8).

    O(P) central differences, so only call on small networks.
    """
    loss_only, loss_grad = {
        "bce": (bce_loss, bce_loss_grad),
        "mse": (mse_loss, mse_loss_grad),
    }[loss]

    network.zero_grads()
    out = network.forward(x)
    _, dpred = loss_grad(out, target)
    network.backward(dpred)
    analytic = {k: v.copy() for k, v in network.grads().items()}

    worst = 0.0
    for name, p in network.params().items():
        ga = analytic[name]
        flat = p.reshape(-1)
        for i in range(flat.size):
            orig = flat[i]
            flat[i] = orig + h
            plus = loss_only(network.forward(x), target)
            flat[i] = orig - h
            minus = loss_only(network.forward(x), target)
            flat[i] = orig
            g_fd = (plus - minus) / (2.0 * h)
            g_an = ga.reshape(-1)[i]
            err = abs(g_an - g_fd) / max(abs(g_an) + abs(g_fd), 1e-8)
            worst = max(worst, err)
    return worst
