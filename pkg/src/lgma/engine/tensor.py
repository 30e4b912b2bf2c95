"""Reverse-mode autodiff over numpy arrays.

Ops record the graph eagerly; `backward(loss)` walks it once in reverse
topological order. Inference paths wrap calls in `no_grad()` so nothing is
recorded. float32 by default; the gradient-check suite builds float64 models.
"""
from __future__ import annotations

import contextlib

import numpy as np


class GraphNotRecorded(RuntimeError):
    """backward() called on a value with no recorded computation graph."""


class ShapeMismatch(ValueError):
    """Operand dimensions disagree."""


_recording = True


@contextlib.contextmanager
def no_grad():
    global _recording
    prev = _recording
    _recording = False
    try:
        yield
    finally:
        _recording = prev


class Tensor:
    """A numpy array plus an optional backward closure."""

    __slots__ = ("data", "grad", "requires_grad", "_parents", "_backward")

    def __init__(self, data, requires_grad: bool = False, dtype=None):
        arr = np.asarray(data)
        if dtype is not None:
            arr = arr.astype(dtype, copy=False)
        elif arr.dtype not in (np.float32, np.float64):
            arr = arr.astype(np.float32)
        self.data = arr
        self.grad = None
        self.requires_grad = bool(requires_grad)
        self._parents: tuple = ()
        self._backward = None

    @property
    def shape(self):
        return self.data.shape

    @property
    def dtype(self):
        return self.data.dtype

    def zero_grad(self) -> None:
        self.grad = None

    def backward(self) -> None:
        backward(self)

    # operator sugar
    def __add__(self, other):
        return add(self, other)

    def __sub__(self, other):
        return sub(self, other)

    def __mul__(self, other):
        return mul(self, other)

    def __matmul__(self, other):
        return matmul(self, other)

    def __repr__(self):
        return f"Tensor(shape={self.data.shape}, grad={'yes' if self.requires_grad else 'no'})"


def _as_tensor(x) -> Tensor:
    return x if isinstance(x, Tensor) else Tensor(x)


def _tracked(t: Tensor) -> bool:
    return t.requires_grad or t._parents


def _make(data: np.ndarray, parents: tuple, backward_fn) -> Tensor:
    out = Tensor.__new__(Tensor)
    out.data = data
    out.grad = None
    out.requires_grad = False
    if _recording and any(_tracked(p) for p in parents):
        out._parents = parents
        out._backward = backward_fn
    else:
        out._parents = ()
        out._backward = None
    return out


def _accum(t: Tensor, g: np.ndarray, fresh: bool = False) -> None:
    """Accumulate into t.grad; `fresh` marks g as newly allocated (no copy needed)."""
    if not _tracked(t):
        return
    if t.grad is None:
        if fresh and isinstance(g, np.ndarray):
            t.grad = g
        else:
            t.grad = np.array(g, copy=True)
    else:
        t.grad += g


def _unbroadcast(g: np.ndarray, shape: tuple) -> np.ndarray:
    """Sum g down to `shape` (inverse of numpy broadcasting)."""
    while g.ndim > len(shape):
        g = g.sum(axis=0)
    for axis, dim in enumerate(shape):
        if dim == 1 and g.shape[axis] != 1:
            g = g.sum(axis=axis, keepdims=True)
    return g


def backward(loss: Tensor) -> None:
    """Accumulate dloss/dx into .grad over the recorded graph."""
    if loss._backward is None and not loss._parents:
        raise GraphNotRecorded("no computation graph recorded for this value")
    if loss.data.size != 1:
        raise ValueError("backward() requires a scalar loss")
    topo: list[Tensor] = []
    seen: set[int] = set()
    stack: list[tuple[Tensor, bool]] = [(loss, False)]
    while stack:
        node, processed = stack.pop()
        if processed:
            topo.append(node)
            continue
        if id(node) in seen:
            continue
        seen.add(id(node))
        stack.append((node, True))
        for parent in node._parents:
            if id(parent) not in seen and (parent._parents or parent.requires_grad):
                stack.append((parent, False))
    loss.grad = np.ones_like(loss.data)
    for node in reversed(topo):
        if node._backward is not None and node.grad is not None:
            node._backward(node.grad)


# ---------------------------------------------------------------------------
# primitive ops
# ---------------------------------------------------------------------------

def add(a, b) -> Tensor:
    a, b = _as_tensor(a), _as_tensor(b)
    out_data = a.data + b.data

    def back(g):
        if _tracked(a):
            ga = _unbroadcast(g, a.data.shape)
            _accum(a, ga, fresh=ga is not g)
        if _tracked(b):
            gb = _unbroadcast(g, b.data.shape)
            _accum(b, gb, fresh=gb is not g)

    return _make(out_data, (a, b), back)


def sub(a, b) -> Tensor:
    a, b = _as_tensor(a), _as_tensor(b)
    out_data = a.data - b.data

    def back(g):
        if _tracked(a):
            ga = _unbroadcast(g, a.data.shape)
            _accum(a, ga, fresh=ga is not g)
        if _tracked(b):
            _accum(b, _unbroadcast(-g, b.data.shape), fresh=True)

    return _make(out_data, (a, b), back)


def mul(a, b) -> Tensor:
    a, b = _as_tensor(a), _as_tensor(b)
    out_data = a.data * b.data

    def back(g):
        if _tracked(a):
            _accum(a, _unbroadcast(g * b.data, a.data.shape), fresh=True)
        if _tracked(b):
            _accum(b, _unbroadcast(g * a.data, b.data.shape), fresh=True)

    return _make(out_data, (a, b), back)


def scale(a, s: float) -> Tensor:
    a = _as_tensor(a)
    s = a.data.dtype.type(s)
    out_data = a.data * s

    def back(g):
        _accum(a, g * s, fresh=True)

    return _make(out_data, (a,), back)


def matmul(a, b) -> Tensor:
    a, b = _as_tensor(a), _as_tensor(b)
    if a.data.ndim != 2 or b.data.ndim != 2 or a.data.shape[1] != b.data.shape[0]:
        raise ShapeMismatch(f"matmul {a.data.shape} @ {b.data.shape}")
    out_data = a.data @ b.data

    def back(g):
        if _tracked(a):
            _accum(a, g @ b.data.T, fresh=True)
        if _tracked(b):
            _accum(b, a.data.T @ g, fresh=True)

    return _make(out_data, (a, b), back)


def tanh(a) -> Tensor:
    a = _as_tensor(a)
    out_data = np.tanh(a.data)

    def back(g):
        _accum(a, g * (1.0 - out_data * out_data), fresh=True)

    return _make(out_data, (a,), back)


def sigmoid(a) -> Tensor:
    a = _as_tensor(a)
    x = a.data
    out_data = np.empty_like(x)
    pos = x >= 0
    out_data[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out_data[~pos] = ex / (1.0 + ex)

    def back(g):
        _accum(a, g * out_data * (1.0 - out_data), fresh=True)

    return _make(out_data, (a,), back)


def relu(a) -> Tensor:
    a = _as_tensor(a)
    out_data = np.maximum(a.data, 0)

    def back(g):
        _accum(a, g * (a.data > 0), fresh=True)

    return _make(out_data, (a,), back)


def concat(parts, axis: int = -1) -> Tensor:
    parts = [_as_tensor(p) for p in parts]
    out_data = np.concatenate([p.data for p in parts], axis=axis)
    sizes = [p.data.shape[axis] for p in parts]

    def back(g):
        offset = 0
        for p, size in zip(parts, sizes):
            index = [slice(None)] * g.ndim
            index[axis] = slice(offset, offset + size)
            if _tracked(p):
                _accum(p, g[tuple(index)], fresh=True)
            offset += size

    return _make(out_data, tuple(parts), back)


def narrow(a, start: int, stop: int, axis: int = -1) -> Tensor:
    a = _as_tensor(a)
    index = [slice(None)] * a.data.ndim
    index[axis] = slice(start, stop)
    index = tuple(index)
    out_data = a.data[index].copy()

    def back(g):
        full = np.zeros_like(a.data)
        full[index] = g
        _accum(a, full, fresh=True)

    return _make(out_data, (a,), back)


def sumall(a) -> Tensor:
    a = _as_tensor(a)
    out_data = np.asarray(a.data.sum(), dtype=a.data.dtype)

    def back(g):
        _accum(a, np.broadcast_to(g, a.data.shape).astype(a.data.dtype), fresh=True)

    return _make(out_data, (a,), back)


def mean(a) -> Tensor:
    a = _as_tensor(a)
    n = a.data.size
    out_data = np.asarray(a.data.mean(), dtype=a.data.dtype)

    def back(g):
        _accum(a, np.broadcast_to(g / n, a.data.shape).astype(a.data.dtype), fresh=True)

    return _make(out_data, (a,), back)


def avg_pool_groups(a, group: int) -> Tensor:
    """[B, D] -> [B, D/group], mean over consecutive groups."""
    a = _as_tensor(a)
    batch, dim = a.data.shape
    if dim % group:
        raise ShapeMismatch(f"dim {dim} not divisible by group {group}")
    out_data = a.data.reshape(batch, dim // group, group).mean(axis=2)

    def back(g):
        _accum(a, np.repeat(g / group, group, axis=1), fresh=True)

    return _make(out_data, (a,), back)


def repeat_groups(a, group: int) -> Tensor:
    """[B, D] -> [B, D*group], each element repeated `group` times."""
    a = _as_tensor(a)

    out_data = np.repeat(a.data, group, axis=1)

    def back(g):
        batch = g.shape[0]
        _accum(a, g.reshape(batch, -1, group).sum(axis=2), fresh=True)

    return _make(out_data, (a,), back)


def mse(pred, target, weight=None) -> Tensor:
    """Mean squared error; optional broadcastable weight on the squared terms."""
    diff = sub(pred, target)
    sq = mul(diff, diff)
    if weight is not None:
        sq = mul(sq, weight)
    return mean(sq)


def softmax_cross_entropy(logits, labels: np.ndarray) -> Tensor:
    """Mean cross-entropy of softmax(logits [B, C]) against int labels [B]."""
    logits = _as_tensor(logits)
    x = logits.data
    if x.ndim != 2 or labels.shape != (x.shape[0],):
        raise ShapeMismatch(f"softmax_cross_entropy {x.shape} vs labels {labels.shape}")
    shifted = x - x.max(axis=1, keepdims=True)
    expx = np.exp(shifted)
    probs = expx / expx.sum(axis=1, keepdims=True)
    batch = x.shape[0]
    picked = np.clip(probs[np.arange(batch), labels], 1e-30, None)
    out_data = np.asarray(-np.log(picked).mean(), dtype=x.dtype)

    def back(g):
        grad = probs.copy()
        grad[np.arange(batch), labels] -= 1.0
        _accum(logits, grad * (g / batch), fresh=True)

    return _make(out_data, (logits,), back)
