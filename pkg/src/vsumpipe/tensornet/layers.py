"""Dense, temporal convolution, and (bi)directional LSTM layers.

All layers consume and produce (B, T, D) float64 arrays and cache whatever
the backward pass needs. backward() overwrites the parameter gradients
(one backward per forward), so training steps need no zeroing pass.
Weight init is Glorot-uniform from a caller-supplied numpy Generator; LSTM
forget-gate biases start at 1.0 (gate order in the fused weight matrices is
input, forget, output, candidate).
"""

from __future__ import annotations

import numpy as np

from ..dataio import LayerSpec
from ..errors import ShapeError

ACTIVATIONS = ("linear", "relu", "sigmoid")


def glorot(rng: np.random.Generator, fan_in: int, fan_out: int, shape) -> np.ndarray:
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=shape).astype(np.float64)


def _activate(kind: str, z: np.ndarray) -> np.ndarray:
    if kind == "linear":
        return z
    if kind == "relu":
        return np.maximum(z, 0.0)
    if kind == "sigmoid":
        return 1.0 / (1.0 + np.exp(-z))
    raise ValueError(f"unknown activation {kind!r}")


def _activate_grad(kind: str, y: np.ndarray, dy: np.ndarray) -> np.ndarray:
    # derivative expressed through the cached output y
    if kind == "linear":
        return dy
    if kind == "relu":
        return dy * (y > 0.0)
    if kind == "sigmoid":
        return dy * y * (1.0 - y)
    raise ValueError(f"unknown activation {kind!r}")


class Layer:
    name: str = ""

    def params(self) -> dict:
        return {}

    def grads(self) -> dict:
        return {}

    def zero_grads(self) -> None:
        for g in self.grads().values():
            g[...] = 0.0

    def spec(self) -> LayerSpec | None:
        return None

    def forward(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def backward(self, dy: np.ndarray) -> np.ndarray:
        raise NotImplementedError


class Dense(Layer):
    """Affine map applied independently at every time step."""

    def __init__(self, in_dim: int, out_dim: int, activation: str = "linear",
                 rng: np.random.Generator | None = None, name: str = "dense"):
        self.in_dim, self.out_dim, self.activation, self.name = in_dim, out_dim, activation, name
        rng = rng or np.random.default_rng(0)
        self.W = glorot(rng, in_dim, out_dim, (in_dim, out_dim))
        self.b = np.zeros(out_dim)
        self.gW = np.zeros_like(self.W)
        self.gb = np.zeros_like(self.b)
        self._x = None
        self._y = None

    def params(self):
        return {f"{self.name}.W": self.W, f"{self.name}.b": self.b}

    def grads(self):
        return {f"{self.name}.W": self.gW, f"{self.name}.b": self.gb}

    def spec(self):
        return LayerSpec(kind="dense", in_dim=self.in_dim, out_dim=self.out_dim, activation=self.activation)

    def forward(self, x):
        if x.shape[-1] != self.in_dim:
            raise ShapeError(f"{self.name}: expected feature dim {self.in_dim}, got {x.shape[-1]}")
        self._x = x
        z = x.reshape(-1, self.in_dim) @ self.W + self.b
        self._y = _activate(self.activation, z).reshape(*x.shape[:-1], self.out_dim)
        return self._y

    def backward(self, dy):
        dz = _activate_grad(self.activation, self._y, dy).reshape(-1, self.out_dim)
        xf = self._x.reshape(-1, self.in_dim)
        self.gW = xf.T @ dz
        self.gb = dz.sum(axis=0)
        return (dz @ self.W.T).reshape(self._x.shape)


class Conv1D(Layer):
    """Temporal convolution, stride 1, symmetric zero padding (odd width)."""

    def __init__(self, in_dim: int, out_dim: int, kernel_width: int = 3, activation: str = "relu",
                 rng: np.random.Generator | None = None, name: str = "conv"):
        if kernel_width % 2 != 1:
            raise ValueError("kernel_width must be odd for same-length output")
        self.in_dim, self.out_dim, self.k, self.activation, self.name = in_dim, out_dim, kernel_width, activation, name
        rng = rng or np.random.default_rng(0)
        self.W = glorot(rng, kernel_width * in_dim, kernel_width * out_dim, (kernel_width, in_dim, out_dim))
        self.b = np.zeros(out_dim)
        self.gW = np.zeros_like(self.W)
        self.gb = np.zeros_like(self.b)
        self._cols = None
        self._y = None
        self._in_shape = None

    def params(self):
        return {f"{self.name}.W": self.W, f"{self.name}.b": self.b}

    def grads(self):
        return {f"{self.name}.W": self.gW, f"{self.name}.b": self.gb}

    def spec(self):
        return LayerSpec(kind="conv1d", in_dim=self.in_dim, out_dim=self.out_dim,
                         kernel_width=self.k, activation=self.activation)

    def _im2col(self, x):
        b, t, d = x.shape
        pad = self.k // 2
        xp = np.zeros((b, t + 2 * pad, d))
        xp[:, pad : pad + t] = x
        return np.concatenate([xp[:, i : i + t] for i in range(self.k)], axis=2)

    def forward(self, x):
        if x.shape[-1] != self.in_dim:
            raise ShapeError(f"{self.name}: expected feature dim {self.in_dim}, got {x.shape[-1]}")
        self._in_shape = x.shape
        b, t, _ = x.shape
        self._cols = self._im2col(x)  # (B, T, k*in)
        z = self._cols.reshape(b * t, -1) @ self.W.reshape(self.k * self.in_dim, self.out_dim) + self.b
        self._y = _activate(self.activation, z).reshape(b, t, self.out_dim)
        return self._y

    def backward(self, dy):
        b, t, _ = self._in_shape
        pad = self.k // 2
        dz = _activate_grad(self.activation, self._y, dy).reshape(b * t, self.out_dim)
        self.gW = (self._cols.reshape(b * t, -1).T @ dz).reshape(self.W.shape)
        self.gb = dz.sum(axis=0)
        dcols = (dz @ self.W.reshape(self.k * self.in_dim, self.out_dim).T).reshape(b, t, self.k, self.in_dim)
        dxp = np.zeros((b, t + 2 * pad, self.in_dim))
        for i in range(self.k):
            dxp[:, i : i + t] += dcols[:, :, i]
        return dxp[:, pad : pad + t]


class _LSTMCell:
    """One direction. Fused weights: Wx (in, 4H), Wh (H, 4H), b (4H,)."""

    def __init__(self, in_dim: int, hidden: int, rng: np.random.Generator):
        self.in_dim, self.hidden = in_dim, hidden
        self.Wx = glorot(rng, in_dim, 4 * hidden, (in_dim, 4 * hidden))
        self.Wh = glorot(rng, hidden, 4 * hidden, (hidden, 4 * hidden))
        self.b = np.zeros(4 * hidden)
        self.b[hidden : 2 * hidden] = 1.0  # forget gate bias
        self.gWx = np.zeros_like(self.Wx)
        self.gWh = np.zeros_like(self.Wh)
        self.gb = np.zeros_like(self.b)
        self._cache = None

    def forward(self, x):
        b, t, _ = x.shape
        h = self.hidden
        xp = x.reshape(b * t, self.in_dim) @ self.Wx
        xp = xp.reshape(b, t, 4 * h)
        hs = np.zeros((t, b, h))
        gates = np.zeros((t, b, 4 * h))
        cs = np.zeros((t, b, h))
        tanh_cs = np.zeros((t, b, h))
        h_prev = np.zeros((b, h))
        c_prev = np.zeros((b, h))
        for step in range(t):
            z = xp[:, step] + h_prev @ self.Wh + self.b
            i = 1.0 / (1.0 + np.exp(-z[:, :h]))
            f = 1.0 / (1.0 + np.exp(-z[:, h : 2 * h]))
            o = 1.0 / (1.0 + np.exp(-z[:, 2 * h : 3 * h]))
            g = np.tanh(z[:, 3 * h :])
            c = f * c_prev + i * g
            tc = np.tanh(c)
            h_new = o * tc
            gates[step] = np.concatenate([i, f, o, g], axis=1)
            cs[step] = c
            tanh_cs[step] = tc
            hs[step] = h_new
            h_prev, c_prev = h_new, c
        self._cache = (x, gates, cs, tanh_cs, hs)
        return hs.transpose(1, 0, 2)  # (B, T, H)

    def backward(self, dy):
        x, gates, cs, tanh_cs, hs = self._cache
        b, t, _ = x.shape
        h = self.hidden
        dy = dy.transpose(1, 0, 2)  # (T, B, H)
        dzs = np.zeros((t, b, 4 * h))
        dh_next = np.zeros((b, h))
        dc_next = np.zeros((b, h))
        for step in range(t - 1, -1, -1):
            i = gates[step][:, :h]
            f = gates[step][:, h : 2 * h]
            o = gates[step][:, 2 * h : 3 * h]
            g = gates[step][:, 3 * h :]
            c_prev = cs[step - 1] if step > 0 else np.zeros((b, h))
            dh = dy[step] + dh_next
            do = dh * tanh_cs[step]
            dc = dh * o * (1.0 - tanh_cs[step] ** 2) + dc_next
            di = dc * g
            dg = dc * i
            df = dc * c_prev
            dc_next = dc * f
            dz = dzs[step]
            dz[:, :h] = di * i * (1 - i)
            dz[:, h : 2 * h] = df * f * (1 - f)
            dz[:, 2 * h : 3 * h] = do * o * (1 - o)
            dz[:, 3 * h :] = dg * (1 - g**2)
            dh_next = dz @ self.Wh.T
        # weight gradients batched over all time steps in one GEMM each
        dz_flat = dzs.transpose(1, 0, 2).reshape(b * t, 4 * h)
        self.gWx = x.reshape(b * t, self.in_dim).T @ dz_flat
        h_prevs = np.zeros((t, b, h))
        h_prevs[1:] = hs[:-1]
        self.gWh = h_prevs.transpose(1, 0, 2).reshape(b * t, h).T @ dz_flat
        self.gb = dz_flat.sum(axis=0)
        return (dz_flat @ self.Wx.T).reshape(b, t, self.in_dim)


class LSTM(Layer):
    """Standard LSTM over the time axis; bidirectional concatenates a pass
    over the reversed sequence, doubling the output dimension."""

    def __init__(self, in_dim: int, hidden: int, bidirectional: bool = True,
                 rng: np.random.Generator | None = None, name: str = "lstm"):
        self.in_dim, self.hidden, self.bidirectional, self.name = in_dim, hidden, bidirectional, name
        rng = rng or np.random.default_rng(0)
        self.fw = _LSTMCell(in_dim, hidden, rng)
        self.bw = _LSTMCell(in_dim, hidden, rng) if bidirectional else None

    @property
    def out_dim(self) -> int:
        return self.hidden * (2 if self.bidirectional else 1)

    def params(self):
        out = {
            f"{self.name}.fw.Wx": self.fw.Wx,
            f"{self.name}.fw.Wh": self.fw.Wh,
            f"{self.name}.fw.b": self.fw.b,
        }
        if self.bw is not None:
            out.update({
                f"{self.name}.bw.Wx": self.bw.Wx,
                f"{self.name}.bw.Wh": self.bw.Wh,
                f"{self.name}.bw.b": self.bw.b,
            })
        return out

    def grads(self):
        out = {
            f"{self.name}.fw.Wx": self.fw.gWx,
            f"{self.name}.fw.Wh": self.fw.gWh,
            f"{self.name}.fw.b": self.fw.gb,
        }
        if self.bw is not None:
            out.update({
                f"{self.name}.bw.Wx": self.bw.gWx,
                f"{self.name}.bw.Wh": self.bw.gWh,
                f"{self.name}.bw.b": self.bw.gb,
            })
        return out

    def spec(self):
        return LayerSpec(kind="lstm", in_dim=self.in_dim, out_dim=self.out_dim,
                         bidirectional=self.bidirectional, activation="linear")

    def forward(self, x):
        if x.shape[-1] != self.in_dim:
            raise ShapeError(f"{self.name}: expected feature dim {self.in_dim}, got {x.shape[-1]}")
        out_f = self.fw.forward(x)
        if self.bw is None:
            return out_f
        out_b = self.bw.forward(x[:, ::-1])[:, ::-1]
        return np.concatenate([out_f, out_b], axis=2)

    def backward(self, dy):
        h = self.hidden
        if self.bw is None:
            return self.fw.backward(dy)
        dx = self.fw.backward(dy[:, :, :h])
        dx += self.bw.backward(dy[:, ::-1, h:])[:, ::-1]
        return dx


class TimeSlice(Layer):
    """Keep only the middle time step; structural, no parameters."""

    def __init__(self, name: str = "center"):
        self.name = name
        self._in_shape = None
        self._idx = None

    def forward(self, x):
        self._in_shape = x.shape
        self._idx = x.shape[1] // 2
        return x[:, self._idx : self._idx + 1]

    def backward(self, dy):
        dx = np.zeros(self._in_shape)
        dx[:, self._idx : self._idx + 1] = dy
        return dx


class Network:
    """Sequential container with merged parameter/gradient namespaces."""

    def __init__(self, layers: list):
        self.layers = layers

    def forward(self, x: np.ndarray) -> np.ndarray:
        for layer in self.layers:
            x = layer.forward(x)
        return x

    def backward(self, dy: np.ndarray) -> np.ndarray:
        for layer in reversed(self.layers):
            dy = layer.backward(dy)
        return dy

    def params(self) -> dict:
        out = {}
        for layer in self.layers:
            out.update(layer.params())
        return out

    def grads(self) -> dict:
        out = {}
        for layer in self.layers:
            out.update(layer.grads())
        return out

    def zero_grads(self) -> None:
        for layer in self.layers:
            layer.zero_grads()

    def specs(self) -> list:
        return [s for s in (layer.spec() for layer in self.layers) if s is not None]

    def snapshot(self) -> dict:
        return {k: v.copy() for k, v in self.params().items()}

    def load_params(self, weights: dict, prefix: str = "") -> None:
        params = self.params()
        for name, value in params.items():
            key = prefix + name
            if key not in weights:
                raise ValueError(f"missing weight {key!r}")
            w = weights[key]
            if w.shape != value.shape:
                raise ValueError(f"weight {key!r} has shape {w.shape}, expected {value.shape}")
            value[...] = w


def build_layer(spec: LayerSpec, rng: np.random.Generator, name: str) -> Layer:
    if spec.kind == "dense":
        return Dense(spec.in_dim, spec.out_dim, spec.activation, rng, name)
    if spec.kind == "conv1d":
        return Conv1D(spec.in_dim, spec.out_dim, spec.kernel_width, spec.activation, rng, name)
    if spec.kind == "lstm":
        hidden = spec.out_dim // 2 if spec.bidirectional else spec.out_dim
        return LSTM(spec.in_dim, hidden, spec.bidirectional, rng, name)
    raise ValueError(f"unknown layer kind {spec.kind!r}")
