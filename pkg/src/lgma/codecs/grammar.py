"""The task grammar: every sentence shape the system hears or produces.

Filler words are split into a training half and an evaluation half; the
evaluation half never appears in association-module training sentences, which
is what the out-of-vocabulary rule generalization test leans on.
"""
from __future__ import annotations

import numpy as np

from lgma.codecs.lexicon import (
    ACTION_WORDS,
    COLOR_WORDS,
    FILLER_WORDS,
    PAIN_WORDS,
    SIZE_WORDS,
    Utterance,
)

TRAIN_FILLERS = FILLER_WORDS[:24]
EVAL_FILLERS = FILLER_WORDS[24:]

ATTR_WORDS = COLOR_WORDS + SIZE_WORDS
QUERY_SENTENCES = [["pain?"], ["what", "you", "did?"], ["you", "did?"], ["sequence?"], ["condition?"]]
REPORT_SENTENCES = [["very", "painful"], ["no", "pain"], ["pull"], ["push"], ["touch"],
                    ["fetch"], ["T"], ["F"], ["none"], ["t2"], ["arm"]]


def sample_command(rng: np.random.Generator) -> list[str]:
    action = str(rng.choice(ACTION_WORDS))
    if rng.random() < 0.75:
        return [action, str(rng.choice(ATTR_WORDS))]
    return [action]


def sample_rule(rng: np.random.Generator, fillers: list[str],
                pain_bias: float = 0.25) -> tuple[list[str], list[str], list[str], list[str]]:
    """Returns (tokens, condition words, then words, else words)."""
    slot_pool = fillers + ACTION_WORDS + ATTR_WORDS + PAIN_WORDS

    def slot(max_words: int) -> list[str]:
        n = int(rng.integers(1, max_words + 1))
        return [str(w) for w in rng.choice(slot_pool, size=n, replace=False)]

    cond = ["pain"] if rng.random() < pain_bias else slot(2)
    then = slot(2)
    els = slot(2) if rng.random() < 0.5 else []
    tokens = ["if", *cond, ",", "then", *then]
    if els:
        tokens += [",", "else", *els]
    return tokens, cond, then, els


def sample_filler_phrase(rng: np.random.Generator, fillers: list[str]) -> list[str]:
    n = int(rng.integers(1, 4))
    return [str(w) for w in rng.choice(fillers, size=n, replace=False)]


def sample_imagine(rng: np.random.Generator) -> list[str]:
    out = ["IMAGINE", str(rng.choice(ACTION_WORDS))]
    if rng.random() < 0.5:
        out.append(str(rng.choice(ATTR_WORDS)))
    return out


def sample_sentence(rng: np.random.Generator,
                    fillers: list[str] | None = None) -> list[str]:
    """One sentence from the full task grammar."""
    fillers = fillers if fillers is not None else TRAIN_FILLERS
    roll = rng.random()
    if roll < 0.30:
        return sample_command(rng)
    if roll < 0.60:
        return sample_rule(rng, fillers)[0]
    if roll < 0.70:
        return [str(w) for w in QUERY_SENTENCES[int(rng.integers(len(QUERY_SENTENCES)))]]
    if roll < 0.80:
        return [str(w) for w in REPORT_SENTENCES[int(rng.integers(len(REPORT_SENTENCES)))]]
    if roll < 0.88:
        return sample_imagine(rng)
    return sample_filler_phrase(rng, fillers)


def sample_utterance(rng: np.random.Generator,
                     fillers: list[str] | None = None) -> Utterance:
    return Utterance(tuple(sample_sentence(rng, fillers)))
