"""Deterministic randomness.

Every stochastic step in the pipeline draws from one root seed through
``subseed(root, *labels)`` so a run is fully reproducible from the recorded
config. Derivation and shuffling use SplitMix64, a tiny 64-bit generator
with a documented closed form; heavier sampling (Gaussian noise, weight
init) goes through ``numpy_rng``, seeded from the same derivation.
"""

from __future__ import annotations

import numpy as np

_MASK = (1 << 64) - 1


def _mix(z: int) -> int:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 & _MASK
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB & _MASK
    return z ^ (z >> 31)


class SplitMix64:
    """SplitMix64 stream: state += golden gamma, output = mix(state)."""

    def __init__(self, seed: int):
        self._state = seed & _MASK

    def next_u64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & _MASK
        return _mix(self._state)

    def randrange(self, n: int) -> int:
        """Uniform integer in [0, n), rejection-sampled so it is unbiased."""
        if n <= 0:
            raise ValueError("randrange needs n >= 1")
        limit = _MASK - (_MASK + 1) % n
        while True:
            u = self.next_u64()
            if u <= limit:
                return u % n

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates."""
        for i in range(len(items) - 1, 0, -1):
            j = self.randrange(i + 1)
            items[i], items[j] = items[j], items[i]

    def permutation(self, n: int) -> np.ndarray:
        idx = list(range(n))
        self.shuffle(idx)
        return np.asarray(idx, dtype=np.int64)


def subseed(root: int, *labels: str | int) -> int:
    """Derive a purpose-specific 64-bit seed from the root seed.

    Integers fold in directly; strings fold byte by byte followed by a
    length tag (so adjacent labels cannot collide by concatenation). Each
    fold is one SplitMix64 finalizer round over (state + unit).
    """
    state = _mix(root & _MASK)
    for label in labels:
        if isinstance(label, int):
            state = _mix((state + (label & _MASK)) & _MASK)
        else:
            data = label.encode("utf-8")
            for b in data:
                state = _mix((state + b + 1) & _MASK)
            state = _mix((state + len(data)) & _MASK)
    return state


def numpy_rng(root: int, *labels: str | int) -> np.random.Generator:
    return np.random.default_rng(subseed(root, *labels))
