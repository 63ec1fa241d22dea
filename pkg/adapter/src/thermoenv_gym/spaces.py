"""Minimal Box space, used when gymnasium is not installed.

Mirrors the attributes RL code usually touches: low/high/shape/dtype,
``sample`` and ``contains``.
"""

from __future__ import annotations

import numpy as np


class Box:
    def __init__(self, low, high, dtype=np.float64):
        self.low = np.asarray(low, dtype=dtype)
        self.high = np.asarray(high, dtype=dtype)
        if self.low.shape != self.high.shape:
            raise ValueError("low and high must share a shape")
        self.shape = self.low.shape
        self.dtype = np.dtype(dtype)
        self._rng = np.random.default_rng()

    def seed(self, seed=None):
        self._rng = np.random.default_rng(seed)

    def sample(self):
        return self._rng.uniform(self.low, self.high).astype(self.dtype)

    def contains(self, x) -> bool:
        x = np.asarray(x)
        return x.shape == self.shape and bool(
            np.all(x >= self.low) and np.all(x <= self.high)
        )

    def __repr__(self):
        return f"Box(shape={self.shape}, low={self.low.min()}, high={self.high.max()})"
