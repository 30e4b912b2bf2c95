"""Bias-corrected Adam over named parameter dicts."""
from __future__ import annotations

import numpy as np

from lgma.engine.tensor import ShapeMismatch, Tensor


class AdamState:
    """First/second moments per parameter plus the shared step counter."""

    def __init__(self, lr: float = 1e-3, beta1: float = 0.9, beta2: float = 0.999,
                 eps: float = 1e-8):
        self.lr = lr
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.step = 0
        self.m: dict[str, np.ndarray] = {}
        self.v: dict[str, np.ndarray] = {}


def adam_update(state: AdamState, params: dict[str, Tensor],
                grads: dict[str, np.ndarray]) -> None:
    """One Adam step in place; missing grads are treated as zero."""
    state.step += 1
    t = state.step
    b1, b2 = state.beta1, state.beta2
    for name, p in params.items():
        g = grads.get(name)
        if g is None:
            continue
        if g.shape != p.data.shape:
            raise ShapeMismatch(f"{name}: grad {g.shape} vs param {p.data.shape}")
        if name not in state.m:
            state.m[name] = np.zeros_like(p.data)
            state.v[name] = np.zeros_like(p.data)
        m, v = state.m[name], state.v[name]
        m *= b1
        m += (1.0 - b1) * g
        v *= b2
        v += (1.0 - b2) * np.square(g)
        # standard bias-corrected update, arranged to avoid large temporaries:
        # lr * (m / bc1) / (sqrt(v / bc2) + eps)
        denom = np.sqrt(v)
        denom *= 1.0 / np.sqrt(1.0 - b2 ** t)
        denom += state.eps
        np.divide(m, denom, out=denom)
        denom *= state.lr / (1.0 - b1 ** t)
        p.data -= denom
