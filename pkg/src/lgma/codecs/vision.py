"""Visual autoencoder: dense 12288->512->256 encoder with a pooled V1->V3 skip,
mirrored decoder with an unpooled skip into the 512 layer."""
from __future__ import annotations

from pathlib import Path

import numpy as np

from lgma import config
from lgma.engine import layers as L
from lgma.engine import tensor as T
from lgma.engine.checkpoint import load_checkpoint, save_checkpoint

PIXELS = config.IMAGE_SIZE * config.IMAGE_SIZE * 3
V1_DIM = 512
SKIP_DIM = 64
SKIP_GROUP = V1_DIM // SKIP_DIM
CODE = config.MODAL_DIM


class NotTrained(RuntimeError):
    """Codec/module used before its checkpoint was trained or loaded."""


class VisionCodec:
    def __init__(self, rng: np.random.Generator | None = None):
        rng = rng or np.random.default_rng(0)
        self.v1 = L.DenseLayer(PIXELS, V1_DIM, "tanh", rng)
        self.v2 = L.DenseLayer(V1_DIM, CODE, "tanh", rng)
        self.v3 = L.DenseLayer(CODE + SKIP_DIM, CODE, "tanh", rng)
        self.d3 = L.DenseLayer(CODE, CODE + SKIP_DIM, "tanh", rng)
        self.d2 = L.DenseLayer(CODE, V1_DIM, "identity", rng)
        self.d1 = L.DenseLayer(V1_DIM, PIXELS, "identity", rng)
        self.trained = False

    # ------------------------------------------------------------------
    def params(self) -> dict[str, T.Tensor]:
        out: dict[str, T.Tensor] = {}
        for name, layer in (("v1", self.v1), ("v2", self.v2), ("v3", self.v3),
                            ("d3", self.d3), ("d2", self.d2), ("d1", self.d1)):
            out.update(layer.params(name))
        return out

    def encode_t(self, x: T.Tensor) -> T.Tensor:
        h1 = self.v1(x)
        h2 = self.v2(h1)
        skip = T.avg_pool_groups(h1, SKIP_GROUP)
        return self.v3(T.concat([h2, skip], axis=1))

    def decode_t(self, code: T.Tensor) -> T.Tensor:
        g3 = self.d3(code)
        main = T.narrow(g3, 0, CODE)
        skip = T.narrow(g3, CODE, CODE + SKIP_DIM)
        pre = T.add(self.d2(main), T.repeat_groups(skip, SKIP_GROUP))
        return self.d1(T.tanh(pre))

    def recon_loss(self, x: T.Tensor, code_noise: np.ndarray | None = None,
                   active_weight: float = 0.0) -> T.Tensor:
        """MSE with optional extra weight on active target pixels, which keeps
        small squares from fading below threshold (they are a tiny fraction of
        the image)."""
        code = self.encode_t(x)
        if code_noise is not None:
            code = T.add(code, T.Tensor(code_noise))
        recon = self.decode_t(code)
        if active_weight <= 0.0:
            return T.mse(recon, x)
        active = (x.data > 0.05).astype(np.float32)
        # scale-free: each image's active set carries about the same total
        # weight, so a 4-pixel square matters as much as the 90-pixel arm
        counts = active.sum(axis=1, keepdims=True)
        per_px = np.minimum(active_weight * 120.0 / np.maximum(counts, 12.0), 30.0)
        weight = 1.0 + active * per_px.astype(np.float32)
        weight *= weight.size / weight.sum()
        return T.mse(recon, x, weight=T.Tensor(weight))

    # ------------------------------------------------------------------
    def _require_trained(self):
        if not self.trained:
            raise NotTrained("vision codec has no trained weights")

    def encode_batch(self, images: np.ndarray) -> np.ndarray:
        self._require_trained()
        flat = images.reshape(images.shape[0], PIXELS).astype(np.float32)
        with T.no_grad():
            return self.encode_t(T.Tensor(flat)).data

    def decode_batch(self, codes: np.ndarray) -> np.ndarray:
        self._require_trained()
        with T.no_grad():
            flat = self.decode_t(T.Tensor(codes.astype(np.float32))).data
        return np.clip(flat, 0.0, 1.0).reshape(
            -1, config.IMAGE_SIZE, config.IMAGE_SIZE, 3)

    def encode(self, image: np.ndarray) -> np.ndarray:
        return self.encode_batch(image[None])[0]

    def decode(self, code: np.ndarray) -> np.ndarray:
        return self.decode_batch(code[None])[0]

    # ------------------------------------------------------------------
    def save(self, path: str | Path) -> None:
        save_checkpoint("vision", {k: v.data for k, v in self.params().items()}, path)

    def load(self, path: str | Path) -> "VisionCodec":
        name, tensors = load_checkpoint(path)
        params = self.params()
        if set(tensors) != set(params):
            raise ValueError(f"checkpoint {name!r} does not match vision codec")
        for key, arr in tensors.items():
            params[key].data = arr
        self.trained = True
        return self
