"""Deterministic differentiable-computation engine: tensors, layers, Adam, checkpoints."""

from lgma.engine.tensor import (
    GraphNotRecorded,
    ShapeMismatch,
    Tensor,
    add,
    avg_pool_groups,
    backward,
    concat,
    matmul,
    mean,
    mse,
    mul,
    narrow,
    no_grad,
    relu,
    repeat_groups,
    scale,
    sigmoid,
    softmax_cross_entropy,
    sub,
    sumall,
    tanh,
)
from lgma.engine.layers import DenseLayer, LstmCell, dense_forward, lstm_step, uniform_init
from lgma.engine.adam import AdamState, adam_update
from lgma.engine.checkpoint import (
    CHECKPOINT_VERSION,
    CorruptCheckpoint,
    VersionMismatch,
    load_checkpoint,
    read_records,
    save_checkpoint,
    write_records,
)

__all__ = [
    "AdamState",
    "CHECKPOINT_VERSION",
    "CorruptCheckpoint",
    "DenseLayer",
    "GraphNotRecorded",
    "LstmCell",
    "ShapeMismatch",
    "Tensor",
    "VersionMismatch",
    "adam_update",
    "add",
    "avg_pool_groups",
    "backward",
    "concat",
    "dense_forward",
    "load_checkpoint",
    "lstm_step",
    "matmul",
    "mean",
    "mse",
    "mul",
    "narrow",
    "no_grad",
    "read_records",
    "relu",
    "repeat_groups",
    "save_checkpoint",
    "scale",
    "sigmoid",
    "softmax_cross_entropy",
    "sub",
    "sumall",
    "tanh",
    "uniform_init",
    "write_records",
]
