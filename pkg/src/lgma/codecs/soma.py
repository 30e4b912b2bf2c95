"""Somatosensorimotor autoencoder over 4-step arm-state blocks.

The 4 x 8 state block (normalized columns) is encoded to a 256-dim sv and
reconstructed by a dense mirror; actuation triples (alpha0, alpha1, hold) are
read from the reconstructed rows. Dense layers keep the actuation columns
sharp enough for world replay.
"""
from __future__ import annotations

from pathlib import Path

import numpy as np

from lgma import config
from lgma.codecs.vision import NotTrained
from lgma.engine import layers as L
from lgma.engine import tensor as T
from lgma.engine.checkpoint import load_checkpoint, save_checkpoint
from lgma.world.state import Trajectory

HIDDEN = 512
SV = config.MODAL_DIM
ROW = 8
FLAT = config.BLOCK_T * ROW

# column scaling: theta/pi, omega/2, alpha as-is (actuation precision dominates)
_SCALE = np.array([np.pi, 2.0, 1.0, np.pi, 2.0, 1.0, 1.0, 1.0])


def normalize_rows(matrix: np.ndarray) -> np.ndarray:
    return (matrix / _SCALE).astype(np.float32)


def denormalize_rows(matrix: np.ndarray) -> np.ndarray:
    return matrix.astype(np.float64) * _SCALE


class SomaCodec:
    def __init__(self, rng: np.random.Generator | None = None):
        rng = rng or np.random.default_rng(0)
        self.e1 = L.DenseLayer(FLAT, HIDDEN, "tanh", rng)
        self.e2 = L.DenseLayer(HIDDEN, SV, "tanh", rng)
        self.d1 = L.DenseLayer(SV, HIDDEN, "tanh", rng)
        self.d2 = L.DenseLayer(HIDDEN, FLAT, "identity", rng)
        self.trained = False

    def params(self) -> dict[str, T.Tensor]:
        out: dict[str, T.Tensor] = {}
        for name, layer in (("e1", self.e1), ("e2", self.e2),
                            ("d1", self.d1), ("d2", self.d2)):
            out.update(layer.params(name))
        return out

    # ------------------------------------------------------------------
    def encode_flat_t(self, x: T.Tensor) -> T.Tensor:
        return self.e2(self.e1(x))

    def decode_flat_t(self, sv: T.Tensor) -> T.Tensor:
        return self.d2(self.d1(sv))

    # ------------------------------------------------------------------
    def _require_trained(self):
        if not self.trained:
            raise NotTrained("soma codec has no trained weights")

    def encode_matrix(self, matrix: np.ndarray) -> np.ndarray:
        return self.encode_batch(matrix[None])[0]

    def encode(self, traj: Trajectory) -> np.ndarray:
        return self.encode_matrix(traj.matrix())

    def encode_batch(self, matrices: np.ndarray) -> np.ndarray:
        """[B, T, 8] -> [B, 256]."""
        self._require_trained()
        rows = normalize_rows(matrices).reshape(matrices.shape[0], FLAT)
        with T.no_grad():
            sv = self.encode_flat_t(T.Tensor(rows))
        return sv.data

    def decode(self, sv: np.ndarray) -> list[tuple[float, float, int]]:
        """Per-step actuation triples (alpha0, alpha1, hold), alphas clamped."""
        rows = self.decode_rows(sv)
        triples = []
        for row in rows:
            a0 = float(np.clip(row[2], -config.ALPHA_MAX, config.ALPHA_MAX))
            a1 = float(np.clip(row[5], -config.ALPHA_MAX, config.ALPHA_MAX))
            hold = int(row[6] > 0.5)
            triples.append((a0, a1, hold))
        return triples

    def decode_rows(self, sv: np.ndarray) -> np.ndarray:
        """Reconstructed (denormalized) T x 8 state matrix."""
        self._require_trained()
        with T.no_grad():
            flat = self.decode_flat_t(T.Tensor(sv[None].astype(np.float32)))
        return denormalize_rows(flat.data[0].reshape(config.BLOCK_T, ROW))

    # ------------------------------------------------------------------
    def save(self, path: str | Path) -> None:
        save_checkpoint("soma", {k: v.data for k, v in self.params().items()}, path)

    def load(self, path: str | Path) -> "SomaCodec":
        name, tensors = load_checkpoint(path)
        params = self.params()
        if set(tensors) != set(params):
            raise ValueError(f"checkpoint {name!r} does not match soma codec")
        for key, arr in tensors.items():
            params[key].data = arr
        self.trained = True
        return self
