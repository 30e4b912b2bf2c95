"""Language autoencoder: frame-sequence LSTM encoder to a 256-dim lv, LSTM
decoder that articulates frames back (snapped to the lexicon table).

The decoder is trained under random zero-masking and small noise on lv, so
mildly lesioned or regressed codes still articulate; the all-zero lv is
trained to articulate 't2'.
"""
from __future__ import annotations

from pathlib import Path

import numpy as np

from lgma import config
from lgma.codecs.lexicon import END, Lexicon, Utterance
from lgma.codecs.vision import NotTrained
from lgma.engine import layers as L
from lgma.engine import tensor as T
from lgma.engine.checkpoint import load_checkpoint, save_checkpoint

HIDDEN = 320
LV = config.MODAL_DIM
FRAME = config.FRAME_DIM


class LanguageCodec:
    def __init__(self, lexicon: Lexicon, rng: np.random.Generator | None = None):
        rng = rng or np.random.default_rng(0)
        self.lexicon = lexicon
        self.enc_cell = L.LstmCell(FRAME, HIDDEN, rng)
        self.enc_head = L.DenseLayer(HIDDEN, LV, "tanh", rng)
        self.dec_cell = L.LstmCell(LV + FRAME, HIDDEN, rng)
        self.dec_head = L.DenseLayer(HIDDEN, FRAME, "identity", rng)
        self.trained = False

    def params(self) -> dict[str, T.Tensor]:
        out: dict[str, T.Tensor] = {}
        out.update(self.enc_cell.params("enc"))
        out.update(self.enc_head.params("ench"))
        out.update(self.dec_cell.params("dec"))
        out.update(self.dec_head.params("dech"))
        return out

    # ------------------------------------------------------------------
    def encode_frames_t(self, frame_steps: list[T.Tensor]) -> T.Tensor:
        """frame_steps: list of [B, FRAME] tensors (END frame included)."""
        batch = frame_steps[0].data.shape[0]
        h, c = self.enc_cell.zero_state(batch)
        for x in frame_steps:
            h, c = self.enc_cell.step(x, h, c)
        return self.enc_head(h)

    def decode_steps_t(self, lv: T.Tensor, teacher_frames: list[np.ndarray]) -> list[T.Tensor]:
        """Teacher-forced decode: inputs are lv + previous target frame."""
        batch = lv.data.shape[0]
        h, c = self.dec_cell.zero_state(batch)
        prev = T.Tensor(np.zeros((batch, FRAME), dtype=np.float32))
        outs = []
        for target in teacher_frames:
            h, c = self.dec_cell.step(T.concat([lv, prev], axis=1), h, c)
            outs.append(self.dec_head(h))
            prev = T.Tensor(target.astype(np.float32))
        return outs

    # ------------------------------------------------------------------
    def _frames_with_end(self, tokens) -> np.ndarray:
        frames = [self.lexicon.frame(t) for t in tokens]
        frames.append(self.lexicon.frame(END))
        return np.stack(frames).astype(np.float32)

    def _require_trained(self):
        if not self.trained:
            raise NotTrained("language codec has no trained weights")

    def encode(self, utterance: Utterance) -> np.ndarray:
        self._require_trained()
        if not self.lexicon.vocabulary_ok(utterance.tokens):
            raise KeyError(f"tokens outside lexicon: {utterance.tokens}")
        frames = self._frames_with_end(utterance.tokens)
        with T.no_grad():
            lv = self.encode_frames_t([T.Tensor(f[None]) for f in frames])
        return lv.data[0]

    def encode_word(self, word: str) -> np.ndarray:
        return self.encode(Utterance((word,)))

    def decode(self, lv: np.ndarray, max_len: int = config.MAX_UTTERANCE + 1) -> Utterance:
        """Articulate: unroll, snapping each frame to the nearest lexicon word."""
        self._require_trained()
        lv_t = T.Tensor(lv[None].astype(np.float32))
        tokens: list[str] = []
        with T.no_grad():
            h, c = self.dec_cell.zero_state(1)
            prev = np.zeros((1, FRAME), dtype=np.float32)
            for _ in range(max_len):
                h, c = self.dec_cell.step(T.concat([lv_t, T.Tensor(prev)], axis=1), h, c)
                frame = self.dec_head(h).data[0]
                word = self.lexicon.snap(frame)
                if word == END:
                    break
                tokens.append(word)
                prev = self.lexicon.frame(word)[None].astype(np.float32)
        return Utterance(tuple(tokens[:config.MAX_UTTERANCE]))

    # ------------------------------------------------------------------
    def save(self, path: str | Path) -> None:
        save_checkpoint("language", {k: v.data for k, v in self.params().items()}, path)

    def load(self, path: str | Path) -> "LanguageCodec":
        name, tensors = load_checkpoint(path)
        params = self.params()
        if set(tensors) != set(params):
            raise ValueError(f"checkpoint {name!r} does not match language codec")
        for key, arr in tensors.items():
            params[key].data = arr
        self.trained = True
        return self


class WordCodebook:
    """lv code per lexicon word, with nearest-word snapping."""

    def __init__(self, codec: LanguageCodec, words: list[str]):
        self.words = list(words)
        self.matrix = np.stack([codec.encode_word(w) for w in self.words])

    def lv(self, word: str) -> np.ndarray:
        return self.matrix[self.words.index(word)]

    def snap(self, lv: np.ndarray) -> str:
        d = self.matrix - lv[None, :]
        return self.words[int(np.argmin(np.einsum("ij,ij->i", d, d)))]
