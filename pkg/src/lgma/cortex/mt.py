"""Language-guided visual attention.

The attended scene lives in the decoded image (the feedback path to early
vision): a trained per-pixel gate, fed local color/context features plus an
embedding of the attention lv, masks the decoded scene; the attended object's
vv is the re-encoding of the gated image. A per-session tracker (intensity
centroids) supplies the 'initial' and 'predict' position reports through
deterministic image translation, and property words come from gated channel
statistics.
"""
from __future__ import annotations

from pathlib import Path

import numpy as np

from lgma import config
from lgma.codecs.language import LanguageCodec, WordCodebook
from lgma.codecs.vision import NotTrained, VisionCodec
from lgma.engine import layers as L
from lgma.engine import tensor as T
from lgma.engine.checkpoint import load_checkpoint, save_checkpoint
from lgma.world.state import COLOR_RGB

ATTENTION_WORDS = list(config.COLORS) + list(config.SIZES) + [
    "arm", "square", "none", "initial", "predict"]

N_FEATURES = 8
EMBED = 16
GATE_HIDDEN = 48
MIN_MASS = 1.0      # gated intensity mass below this reports 'none'
SIZE_CUT = 11.0     # gated mass separating small from big squares
_PX_PER_UNIT = config.IMAGE_SIZE / (2.0 * config.VIEW_HALF)


def box_blur5(img: np.ndarray) -> np.ndarray:
    """5x5 mean filter per channel via an integral image; [B,H,W,C]."""
    pad = 2
    padded = np.pad(img, ((0, 0), (pad + 1, pad), (pad + 1, pad), (0, 0)))
    ii = padded.cumsum(axis=1).cumsum(axis=2)
    k = 2 * pad + 1
    out = (ii[:, k:, k:] - ii[:, :-k, k:] - ii[:, k:, :-k] + ii[:, :-k, :-k])
    return out / (k * k)


def pixel_features(images: np.ndarray) -> np.ndarray:
    """[B,H,W,3] -> [B,H*W,8]: rgb, blurred rgb, grayness, peak."""
    blur = box_blur5(images)
    gray = images.min(axis=3, keepdims=True)
    peak = images.max(axis=3, keepdims=True)
    feats = np.concatenate([images, blur, gray, peak], axis=3)
    b = images.shape[0]
    return feats.reshape(b, -1, N_FEATURES).astype(np.float32)


def shift_image(img: np.ndarray, dx_world: float, dy_world: float) -> np.ndarray:
    """Bilinear translate by a world-space offset; zero fill at the borders."""
    dx = dx_world * _PX_PER_UNIT
    dy = -dy_world * _PX_PER_UNIT
    out = np.zeros_like(img)
    ix, iy = int(np.floor(dx)), int(np.floor(dy))
    fx, fy = dx - ix, dy - iy
    for ox, wx in ((ix, 1.0 - fx), (ix + 1, fx)):
        for oy, wy in ((iy, 1.0 - fy), (iy + 1, fy)):
            if wx * wy == 0.0:
                continue
            shifted = np.zeros_like(img)
            h, w = img.shape[:2]
            ys = slice(max(oy, 0), min(h + oy, h))
            xs = slice(max(ox, 0), min(w + ox, w))
            ys_src = slice(max(-oy, 0), min(h - oy, h))
            xs_src = slice(max(-ox, 0), min(w - ox, w))
            shifted[ys, xs] = img[ys_src, xs_src]
            out += wx * wy * shifted
    return out


def image_mass_centroid(img: np.ndarray) -> tuple[float, np.ndarray | None]:
    """Total intensity mass and world-coordinate centroid of an image."""
    w = img.max(axis=2).astype(np.float64)
    mass = float(w.sum())
    if mass < 1e-6:
        return mass, None
    rows = np.arange(config.IMAGE_SIZE) + 0.5
    cy = float((w.sum(axis=1) * rows).sum() / mass)
    cx = float((w.sum(axis=0) * rows).sum() / mass)
    scale = 1.0 / _PX_PER_UNIT
    return mass, np.array([cx * scale - config.VIEW_HALF,
                           config.VIEW_HALF - cy * scale])


class MT:
    def __init__(self, vision: VisionCodec, language: LanguageCodec,
                 codebook: WordCodebook, rng: np.random.Generator | None = None):
        rng = rng or np.random.default_rng(0)
        self.vision = vision
        self.language = language
        self.codebook = codebook
        self.attn_embed = L.DenseLayer(config.MODAL_DIM, EMBED, "tanh", rng)
        self.g1 = L.DenseLayer(N_FEATURES + EMBED, GATE_HIDDEN, "tanh", rng)
        self.g2 = L.DenseLayer(GATE_HIDDEN, 1, "sigmoid", rng)
        self.trained = False

    # ------------------------------------------------------------------
    def params(self) -> dict[str, T.Tensor]:
        out = {}
        out.update(self.attn_embed.params("emb"))
        out.update(self.g1.params("g1"))
        out.update(self.g2.params("g2"))
        return out

    def gate_t(self, feats: T.Tensor, attn_lv: T.Tensor, pixels: int) -> T.Tensor:
        """Training forward: feats [B*P, 8], attn_lv [B, 256] -> gate [B*P, 1]."""
        emb = self.attn_embed(attn_lv)
        emb_px = _repeat_rows(emb, pixels)
        x = T.concat([feats, emb_px], axis=1)
        return self.g2(self.g1(x))

    def gate_np(self, image: np.ndarray, attn_lv: np.ndarray) -> np.ndarray:
        """[H,W,3] -> per-pixel gate [H,W]."""
        if not self.trained:
            raise NotTrained("mt has no trained weights")
        feats = pixel_features(image[None])[0]
        with T.no_grad():
            emb = self.attn_embed(T.Tensor(attn_lv[None].astype(np.float32)))
            emb_px = np.repeat(emb.data, feats.shape[0], axis=0)
            x = T.Tensor(np.concatenate([feats, emb_px], axis=1))
            gate = self.g2(self.g1(x)).data[:, 0]
        return gate.reshape(config.IMAGE_SIZE, config.IMAGE_SIZE)

    # ------------------------------------------------------------------
    def classify_properties(self, gated: np.ndarray) -> tuple[str, ...]:
        """(size, color) tokens for the gated blob; 'arm' if it is grayscale."""
        active = gated.max(axis=2) > 0.15
        if not active.any():
            return ("none",)
        px = gated[active]
        mean_rgb = px.mean(axis=0)
        if mean_rgb.min() > 0.5 * mean_rgb.max():
            return ("arm",)
        best, best_d = "red", np.inf
        for color, rgb in COLOR_RGB.items():
            proto = np.array(rgb)
            d = float(((mean_rgb / max(mean_rgb.max(), 1e-6)) - proto) @ (
                (mean_rgb / max(mean_rgb.max(), 1e-6)) - proto))
            if d < best_d:
                best, best_d = color, d
        mass = float(gated.max(axis=2).sum())
        size = "big" if mass >= SIZE_CUT else "small"
        return (size, best)

    # ------------------------------------------------------------------
    def session(self) -> "MtSession":
        if not self.trained:
            raise NotTrained("mt has no trained weights")
        return MtSession(self)

    def attend(self, scene_vvs: list[np.ndarray], attention_lvs
               ) -> tuple[np.ndarray, np.ndarray]:
        if isinstance(attention_lvs, np.ndarray):
            attention_lvs = [attention_lvs] * len(scene_vvs)
        sess = self.session()
        ovv = olv = None
        for vv, attn in zip(scene_vvs, attention_lvs):
            ovv, olv = sess.step(vv, attn)
        return ovv, olv

    # ------------------------------------------------------------------
    def save(self, path: str | Path) -> None:
        save_checkpoint("mt", {k: v.data for k, v in self.params().items()}, path)

    def load(self, path: str | Path) -> "MT":
        name, tensors = load_checkpoint(path)
        params = self.params()
        if set(tensors) != set(params):
            raise ValueError(f"checkpoint {name!r} does not match mt")
        for key, arr in tensors.items():
            params[key].data = arr
        self.trained = True
        return self


def _repeat_rows(t: T.Tensor, times: int) -> T.Tensor:
    out_data = np.repeat(t.data, times, axis=0)

    def back(g):
        T._accum(t, g.reshape(t.data.shape[0], times, -1).sum(axis=1), fresh=True)

    return T._make(out_data, (t,), back)


class MtSession:
    """Per-session attention state: first-seen and previous blob positions."""

    def __init__(self, module: MT):
        self.module = module
        self.first_pos: np.ndarray | None = None
        self.prev_pos: np.ndarray | None = None
        self._none_code: np.ndarray | None = None

    def _none(self) -> tuple[np.ndarray, np.ndarray]:
        if self._none_code is None:
            empty = np.zeros((config.IMAGE_SIZE, config.IMAGE_SIZE, 3),
                             dtype=np.float32)
            self._none_code = self.module.vision.encode(empty)
        return self._none_code, self.module.codebook.lv("none").astype(np.float32)

    def step(self, scene_vv: np.ndarray, attention_lv: np.ndarray
             ) -> tuple[np.ndarray, np.ndarray]:
        module = self.module
        word = module.codebook.snap(attention_lv)
        image = module.vision.decode(scene_vv)
        gate = module.gate_np(image, attention_lv)
        gated = gate[:, :, None] * image
        mass, pos = image_mass_centroid(gated)
        if mass < MIN_MASS or pos is None:
            return self._none()
        velocity = np.zeros(2) if self.prev_pos is None else pos - self.prev_pos
        if self.first_pos is None:
            self.first_pos = pos.copy()
        self.prev_pos = pos.copy()

        if word == "initial" and self.first_pos is not None:
            delta = self.first_pos - pos
            out_img = shift_image(gated, delta[0], delta[1])
        elif word == "predict":
            out_img = shift_image(gated, velocity[0], velocity[1])
        else:
            out_img = gated
        ovv = module.vision.encode(np.clip(out_img, 0.0, 1.0).astype(np.float32))
        tokens = module.classify_properties(gated)
        olv = module.language.encode(_utt(tokens)).astype(np.float32)
        return ovv, olv


def _utt(tokens):
    from lgma.codecs.lexicon import Utterance

    return Utterance(tuple(tokens))
