"""Minimal from-scratch neural stack on float64 numpy.

Layers operate on (batch, time, features) arrays and implement explicit
analytic backpropagation; correctness is guarded by the central-difference
checker in :mod:`vsumpipe.tensornet.gradcheck`.
"""

from .layers import LSTM, Conv1D, Dense, Network, TimeSlice, build_layer
from .losses import bce_loss, bce_loss_grad, mse_loss, mse_loss_grad
from .optim import Adam
from .gradcheck import check_gradients

__all__ = [
    "Adam",
    "Conv1D",
    "Dense",
    "LSTM",
    "Network",
    "TimeSlice",
    "bce_loss",
    "bce_loss_grad",
    "build_layer",
    "check_gradients",
    "mse_loss",
    "mse_loss_grad",
]
