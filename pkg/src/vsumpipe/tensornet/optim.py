"""Adam optimizer with bias correction.

The update uses the step-size form of the bias correction
(step = lr * sqrt(1 - beta2^t) / (1 - beta1^t), epsilon scaled to match),
which is algebraically the standard corrected update but needs fewer array
passes; scratch buffers are reused across steps.
"""

from __future__ import annotations

import numpy as np


class Adam:
    def __init__(self, params: dict, lr: float = 0.001, beta1: float = 0.9,
                 beta2: float = 0.999, epsilon: float = 1e-8):
        if lr <= 0:
            raise ValueError("lr must be positive")
        if not (0 < beta1 < 1 and 0 < beta2 < 1):
            raise ValueError("betas must lie in (0, 1)")
        self.params = params
        self.lr, self.beta1, self.beta2, self.epsilon = lr, beta1, beta2, epsilon
        self.step_count = 0
        self.m = {k: np.zeros_like(v) for k, v in params.items()}
        self.v = {k: np.zeros_like(v) for k, v in params.items()}
        self._scratch = {k: np.empty_like(v) for k, v in params.items()}

    def step(self, grads: dict) -> None:
        self.step_count += 1
        t = self.step_count
        correction2 = np.sqrt(1.0 - self.beta2**t)
        step_size = self.lr * correction2 / (1.0 - self.beta1**t)
        eps = self.epsilon * correction2
        for name, p in self.params.items():
            g = grads[name]
            m = self.m[name]
            v = self.v[name]
            tmp = self._scratch[name]
            m *= self.beta1
            np.multiply(g, 1.0 - self.beta1, out=tmp)
            m += tmp
            v *= self.beta2
            np.multiply(g, g, out=tmp)
            tmp *= 1.0 - self.beta2
            v += tmp
            np.sqrt(v, out=tmp)
            tmp += eps
            np.divide(m, tmp, out=tmp)
            tmp *= step_size
            p -= tmp
