"""Shared shape of every association module: one LSTM, dense read-out heads."""
from __future__ import annotations

from pathlib import Path

import numpy as np

from lgma.codecs.vision import NotTrained
from lgma.engine import layers as L
from lgma.engine import tensor as T
from lgma.engine.checkpoint import load_checkpoint, save_checkpoint

HIDDEN = 256


class SeqRegressor:
    """Single-layer LSTM over vector sequences with named dense heads."""

    def __init__(self, name: str, in_dim: int, heads: dict[str, tuple[int, str]],
                 rng: np.random.Generator | None = None, hidden: int = HIDDEN):
        rng = rng or np.random.default_rng(0)
        self.name = name
        self.in_dim = in_dim
        self.hidden = hidden
        self.cell = L.LstmCell(in_dim, hidden, rng)
        self.heads = {
            head: L.DenseLayer(hidden, dim, act, rng)
            for head, (dim, act) in heads.items()
        }
        self.trained = False

    def params(self) -> dict[str, T.Tensor]:
        out = dict(self.cell.params("cell"))
        for head, layer in self.heads.items():
            out.update(layer.params(f"head.{head}"))
        return out

    def require_trained(self):
        if not self.trained:
            raise NotTrained(f"{self.name} has no trained weights")

    # ------------------------------------------------------------------
    # training-time forwards (Tensors, graph recorded)
    def run_cell(self, xs: list[T.Tensor]) -> list[T.Tensor]:
        batch = xs[0].data.shape[0]
        h, c = self.cell.zero_state(batch)
        hs = []
        for x in xs:
            h, c = self.cell.step(x, h, c)
            hs.append(h)
        return hs

    def forward_final(self, xs: list[T.Tensor]) -> dict[str, T.Tensor]:
        h = self.run_cell(xs)[-1]
        return {head: layer(h) for head, layer in self.heads.items()}

    def forward_steps(self, xs: list[T.Tensor], head: str) -> list[T.Tensor]:
        layer = self.heads[head]
        return [layer(h) for h in self.run_cell(xs)]

    # ------------------------------------------------------------------
    # inference (numpy, no graph)
    def infer_final(self, seq: np.ndarray) -> dict[str, np.ndarray]:
        """seq [K, in_dim] -> head outputs for the final step."""
        self.require_trained()
        with T.no_grad():
            outs = self.forward_final([T.Tensor(x[None].astype(np.float32)) for x in seq])
        return {head: t.data[0] for head, t in outs.items()}

    def init_state(self) -> tuple[np.ndarray, np.ndarray]:
        return (np.zeros((1, self.hidden), dtype=np.float32),
                np.zeros((1, self.hidden), dtype=np.float32))

    def step_np(self, x: np.ndarray, state: tuple[np.ndarray, np.ndarray]
                ) -> tuple[dict[str, np.ndarray], tuple[np.ndarray, np.ndarray]]:
        """One streaming step with persistent recurrent state."""
        self.require_trained()
        with T.no_grad():
            h, c = T.Tensor(state[0]), T.Tensor(state[1])
            h, c = self.cell.step(T.Tensor(x[None].astype(np.float32)), h, c)
            outs = {head: layer(h).data[0] for head, layer in self.heads.items()}
        return outs, (h.data, c.data)

    # ------------------------------------------------------------------
    def save(self, path: str | Path) -> None:
        save_checkpoint(self.name, {k: v.data for k, v in self.params().items()}, path)

    def load(self, path: str | Path) -> "SeqRegressor":
        name, tensors = load_checkpoint(path)
        params = self.params()
        if set(tensors) != set(params):
            raise ValueError(f"checkpoint {name!r} does not match module {self.name!r}")
        for key, arr in tensors.items():
            params[key].data = arr
        self.trained = True
        return self
