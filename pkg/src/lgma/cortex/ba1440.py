"""Sensorimotor-to-language reporting: pain, performed action, action sequences."""
from __future__ import annotations

import numpy as np

from lgma import config
from lgma.codecs.language import WordCodebook
from lgma.cortex.base import SeqRegressor

QUERY_TOKENS = {
    "pain?": ("pain?",),
    "what you did?": ("what", "you", "did?"),
    "you did?": ("you", "did?"),
    "sequence?": ("sequence?",),
}


class UnknownQuery(ValueError):
    """Query is not one the module answers."""


class BA1440:
    """LSTM over [sv..., query lv] emitting the answer sentence lv."""

    def __init__(self, rng: np.random.Generator | None = None):
        self.net = SeqRegressor("ba1440", config.MODAL_DIM,
                                {"answer": (config.MODAL_DIM, "tanh")}, rng)

    def report(self, svs: list[np.ndarray], query_lv: np.ndarray) -> np.ndarray:
        self.net.require_trained()
        if not svs:
            raise ValueError("need at least one sv to report on")
        seq = np.stack([*svs, query_lv]).astype(np.float32)
        return self.net.infer_final(seq)["answer"]


def validate_query(tokens: tuple[str, ...]) -> str:
    for canonical, toks in QUERY_TOKENS.items():
        if tokens == toks:
            return canonical
    raise UnknownQuery(f"unsupported query {' '.join(tokens)!r}")
