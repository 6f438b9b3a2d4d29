"""Canonical small-network gradient checks, shared by the CLI `gradcheck`
command and the acceptance suite.

Each network is tiny (a few thousand parameters) so O(P) central
differences stay fast; the seeds are fixed so ReLU pre-activations stay
clear of the kink at the probe step size.
"""

from __future__ import annotations

import numpy as np

from .rng import numpy_rng
from .scorer import ScorerConfig, ScorerModel
from .tensornet import LSTM, Conv1D, Dense, Network, check_gradients

_SEED = 20240915


def _data(rng, batch: int, t: int, dim: int) -> tuple:
    x = rng.standard_normal((batch, t, dim))
    return x, None


def standard_checks(h: float = 1e-5):
    """Yields (name, max relative error) for every layer kind plus the full
    scoring stack on a 5-frame window."""
    rng = numpy_rng(_SEED, "gradcheck")

    net = Network([Dense(6, 5, "sigmoid", rng, "d0"), Dense(5, 1, "sigmoid", rng, "d1")])
    x = rng.standard_normal((2, 5, 6))
    t = (rng.random((2, 5, 1)) < 0.5).astype(float)
    yield "dense", check_gradients(net, x, t, loss="bce", h=h)

    net = Network([Conv1D(4, 6, 3, "relu", rng, "c0"), Dense(6, 1, "sigmoid", rng, "d0")])
    x = rng.standard_normal((2, 5, 4))
    t = (rng.random((2, 5, 1)) < 0.5).astype(float)
    yield "conv1d", check_gradients(net, x, t, loss="bce", h=h)

    net = Network([LSTM(5, 4, bidirectional=False, rng=rng, name="r0"), Dense(4, 1, "sigmoid", rng, "d0")])
    x = rng.standard_normal((2, 5, 5))
    t = (rng.random((2, 5, 1)) < 0.5).astype(float)
    yield "lstm", check_gradients(net, x, t, loss="bce", h=h)

    net = Network([LSTM(5, 3, bidirectional=True, rng=rng, name="r0"), Dense(6, 1, "sigmoid", rng, "d0")])
    x = rng.standard_normal((2, 5, 5))
    t = (rng.random((2, 5, 1)) < 0.5).astype(float)
    yield "bilstm", check_gradients(net, x, t, loss="bce", h=h)

    cfg = ScorerConfig(variant="summarynet", in_dim=8, window_len=5,
                       mlp_width=10, conv_channels=6, lstm_hidden=4, conv_width=3)
    model = ScorerModel(cfg, seed=_SEED)
    x = numpy_rng(_SEED, "gradcheck", "stack").standard_normal((3, 5, 8))
    t = np.array([1.0, 0.0, 1.0])
    yield "summarynet-stack", check_gradients(model.network, x, t, loss="bce", h=h)
