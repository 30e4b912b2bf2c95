"""Sentence synthesis: ordered word lvs -> one sentence lv, lesionable output."""
from __future__ import annotations

import numpy as np

from lgma import config
from lgma.codecs.language import LanguageCodec, WordCodebook
from lgma.codecs.lexicon import END
from lgma.cortex.base import SeqRegressor
from lgma.cortex.lesion import LesionMask


class EmptyInput(ValueError):
    """Composition requires at least one word."""


class Broca:
    def __init__(self, codec: LanguageCodec, codebook: WordCodebook,
                 rng: np.random.Generator | None = None):
        self.codec = codec
        self.codebook = codebook
        self.net = SeqRegressor("broca", config.MODAL_DIM,
                                {"sentence": (config.MODAL_DIM, "tanh")}, rng)

    def compose(self, word_lvs: list[np.ndarray],
                mask: LesionMask | None = None) -> np.ndarray:
        """Sentence lv for the word sequence; the lesion mask zeroes output units."""
        self.net.require_trained()
        if not word_lvs:
            raise EmptyInput("no words to compose")
        seq = np.stack([*word_lvs, self.codebook.lv(END)]).astype(np.float32)
        out = self.net.infer_final(seq)["sentence"]
        if mask is not None:
            out = mask.apply(out)
        return out

    def compose_tokens(self, tokens: list[str],
                       mask: LesionMask | None = None) -> np.ndarray:
        return self.compose([self.codebook.lv(t) for t in tokens], mask)
