"""Intention decomposition into atomic command sequences.

Canonical table: fetch -> reach hold pull release; touch -> reach; the seven
atomic commands pass through; multi-word intention phrases expand word by
word, concatenated.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from lgma import config
from lgma.codecs.language import WordCodebook
from lgma.codecs.lexicon import END
from lgma.cortex.base import SeqRegressor

ATOMIC_COMMANDS = ["reach", "hold", "pull", "push", "release", "retract", "stop"]

EXPANSIONS: dict[str, tuple[str, ...]] = {
    "reach": ("reach",),
    "hold": ("hold",),
    "pull": ("pull",),
    "push": ("push",),
    "release": ("release",),
    "retract": ("retract",),
    "stop": ("stop",),
    "touch": ("reach",),
    "fetch": ("reach", "hold", "pull", "release"),
}

MAX_PLAN = 8


class UnknownIntention(ValueError):
    """Intention does not decode to action words."""


@dataclass(frozen=True)
class AtomicCommand:
    lv: np.ndarray
    token: str
    slot: int


def expand_tokens(intention_words: tuple[str, ...]) -> tuple[str, ...]:
    """Oracle expansion of a 1-2 word intention phrase."""
    out: list[str] = []
    for word in intention_words:
        if word not in EXPANSIONS:
            raise UnknownIntention(f"{word!r} is not an intention token")
        out.extend(EXPANSIONS[word])
    return tuple(out[:MAX_PLAN])


class PreSMA:
    """LSTM unroll with (intention lv, previous command lv) input."""

    def __init__(self, codebook: WordCodebook, rng: np.random.Generator | None = None):
        self.codebook = codebook
        self.net = SeqRegressor("presma", 2 * config.MODAL_DIM,
                                {"cmd": (config.MODAL_DIM, "tanh")}, rng)
        self._snap_words = ATOMIC_COMMANDS + [END]

    def _snap(self, lv: np.ndarray) -> str:
        best, best_d = END, np.inf
        for word in self._snap_words:
            ref = self.codebook.lv(word)
            d = float(((ref - lv) ** 2).sum())
            if d < best_d:
                best, best_d = word, d
        return best

    def decompose(self, intention_lv: np.ndarray) -> list[AtomicCommand]:
        self.net.require_trained()
        state = self.net.init_state()
        prev = np.zeros(config.MODAL_DIM, dtype=np.float32)
        commands: list[AtomicCommand] = []
        for slot in range(MAX_PLAN + 1):
            x = np.concatenate([intention_lv, prev]).astype(np.float32)
            outs, state = self.net.step_np(x, state)
            word = self._snap(outs["cmd"])
            if word == END:
                break
            lv = self.codebook.lv(word).astype(np.float32)
            commands.append(AtomicCommand(lv=lv, token=word, slot=slot))
            prev = lv
        return commands
