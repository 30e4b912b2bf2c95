"""Sentence comprehension: sentence lv -> ordered word lvs, pronunciation corrected."""
from __future__ import annotations

import numpy as np

from lgma import config
from lgma.codecs.language import LanguageCodec, WordCodebook
from lgma.codecs.lexicon import END
from lgma.cortex.base import SeqRegressor


class Wernicke:
    """LSTM unrolled with (sentence lv, previous word lv) input and word-lv output.

    Emitted word lvs snap to the lexicon codebook (confusion partners excluded,
    which is where correction lands); unrolling stops at the end marker.
    """

    def __init__(self, codec: LanguageCodec, codebook: WordCodebook,
                 rng: np.random.Generator | None = None):
        self.codec = codec
        self.codebook = codebook
        self.net = SeqRegressor("wernicke", 2 * config.MODAL_DIM,
                                {"word": (config.MODAL_DIM, "tanh")}, rng)

    def decompose(self, sentence_lv: np.ndarray, max_words: int = config.MAX_UTTERANCE
                  ) -> tuple[list[np.ndarray], list[str]]:
        """Returns (word lvs, tokens); the end marker is consumed, not returned."""
        self.net.require_trained()
        state = self.net.init_state()
        prev = np.zeros(config.MODAL_DIM, dtype=np.float32)
        lvs: list[np.ndarray] = []
        tokens: list[str] = []
        for _ in range(max_words + 1):
            x = np.concatenate([sentence_lv, prev]).astype(np.float32)
            outs, state = self.net.step_np(x, state)
            word = self.codebook.snap(outs["word"])
            if word == END:
                break
            lv = self.codebook.lv(word).astype(np.float32)
            lvs.append(lv)
            tokens.append(word)
            prev = lv
        return lvs, tokens
