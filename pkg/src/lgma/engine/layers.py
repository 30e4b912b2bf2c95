"""Dense layers and LSTM cells on the autodiff core."""
from __future__ import annotations

import numpy as np

from lgma.engine import tensor as T
from lgma.engine.tensor import ShapeMismatch, Tensor

ACTIVATIONS = ("tanh", "sigmoid", "relu", "identity")


def uniform_init(rng: np.random.Generator, shape: tuple, fan_in: int, dtype=np.float32) -> np.ndarray:
    bound = 1.0 / np.sqrt(fan_in)
    return rng.uniform(-bound, bound, size=shape).astype(dtype)


class DenseLayer:
    """activation(W @ x + b) with W [out, in]; bias optional."""

    def __init__(self, in_dim: int, out_dim: int, activation: str = "tanh",
                 rng: np.random.Generator | None = None, dtype=np.float32,
                 use_bias: bool = True):
        if activation not in ACTIVATIONS:
            raise ValueError(f"unknown activation {activation!r}")
        rng = rng or np.random.default_rng(0)
        self.in_dim = in_dim
        self.out_dim = out_dim
        self.activation = activation
        self.use_bias = use_bias
        self.weights = Tensor(uniform_init(rng, (out_dim, in_dim), in_dim, dtype), requires_grad=True)
        self.bias = Tensor(np.zeros(out_dim, dtype=dtype), requires_grad=use_bias)

    def params(self, prefix: str) -> dict[str, Tensor]:
        out = {f"{prefix}.w": self.weights}
        if self.use_bias:
            out[f"{prefix}.b"] = self.bias
        return out

    def __call__(self, x: Tensor) -> Tensor:
        return dense_forward(self, x)


def dense_forward(layer: DenseLayer, x: Tensor) -> Tensor:
    if x.data.ndim != 2 or x.data.shape[1] != layer.in_dim:
        raise ShapeMismatch(f"dense expects [B, {layer.in_dim}], got {x.data.shape}")
    z = T.matmul(x, _transpose(layer.weights))
    if layer.use_bias:
        z = T.add(z, layer.bias)
    if layer.activation == "tanh":
        return T.tanh(z)
    if layer.activation == "sigmoid":
        return T.sigmoid(z)
    if layer.activation == "relu":
        return T.relu(z)
    return z


def _transpose(a: Tensor) -> Tensor:
    out_data = a.data.T

    def back(g):
        T._accum(a, np.ascontiguousarray(g.T), fresh=True)

    return T._make(out_data, (a,), back)


class LstmCell:
    """Standard LSTM cell; four gate matrices [hidden, in+hidden], forget bias 1."""

    def __init__(self, in_dim: int, hidden: int, rng: np.random.Generator | None = None,
                 dtype=np.float32):
        rng = rng or np.random.default_rng(0)
        self.in_dim = in_dim
        self.hidden = hidden
        fan = in_dim + hidden
        def mat():
            return Tensor(uniform_init(rng, (hidden, fan), fan, dtype), requires_grad=True)
        self.wi, self.wf, self.wo, self.wg = mat(), mat(), mat(), mat()
        self.bi = Tensor(np.zeros(hidden, dtype=dtype), requires_grad=True)
        self.bf = Tensor(np.ones(hidden, dtype=dtype), requires_grad=True)
        self.bo = Tensor(np.zeros(hidden, dtype=dtype), requires_grad=True)
        self.bg = Tensor(np.zeros(hidden, dtype=dtype), requires_grad=True)

    def params(self, prefix: str) -> dict[str, Tensor]:
        return {
            f"{prefix}.wi": self.wi, f"{prefix}.wf": self.wf,
            f"{prefix}.wo": self.wo, f"{prefix}.wg": self.wg,
            f"{prefix}.bi": self.bi, f"{prefix}.bf": self.bf,
            f"{prefix}.bo": self.bo, f"{prefix}.bg": self.bg,
        }

    def zero_state(self, batch: int, dtype=None) -> tuple[Tensor, Tensor]:
        dtype = dtype or self.wi.data.dtype
        return (Tensor(np.zeros((batch, self.hidden), dtype=dtype)),
                Tensor(np.zeros((batch, self.hidden), dtype=dtype)))

    def step(self, x: Tensor, h: Tensor, c: Tensor) -> tuple[Tensor, Tensor]:
        return lstm_step(self, x, h, c)


def lstm_step(cell: LstmCell, x: Tensor, h: Tensor, c: Tensor) -> tuple[Tensor, Tensor]:
    if x.data.ndim != 2 or x.data.shape[1] != cell.in_dim:
        raise ShapeMismatch(f"lstm expects [B, {cell.in_dim}], got {x.data.shape}")
    if h.data.shape != c.data.shape or h.data.shape[1] != cell.hidden:
        raise ShapeMismatch(f"lstm state shapes {h.data.shape} / {c.data.shape}")
    z = T.concat([x, h], axis=1)
    gi = T.sigmoid(T.add(T.matmul(z, _transpose(cell.wi)), cell.bi))
    gf = T.sigmoid(T.add(T.matmul(z, _transpose(cell.wf)), cell.bf))
    go = T.sigmoid(T.add(T.matmul(z, _transpose(cell.wo)), cell.bo))
    gg = T.tanh(T.add(T.matmul(z, _transpose(cell.wg)), cell.bg))
    c2 = T.add(T.mul(gf, c), T.mul(gi, gg))
    h2 = T.mul(go, T.tanh(c2))
    return h2, c2
