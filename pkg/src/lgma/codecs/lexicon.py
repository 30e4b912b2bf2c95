"""Word lexicon and the symbolic spectrum-frame table.

Each word owns one fixed 64-float unit-norm frame derived from a per-word
seed; articulation snaps predicted frames to the nearest table entry. The
confusion set holds mispronunciations that map onto lexicon words.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from lgma import config
from lgma.config import named_rng

END = "<end>"

COLOR_WORDS = list(config.COLORS)
SIZE_WORDS = list(config.SIZES)
ACTION_WORDS = ["reach", "hold", "pull", "push", "release", "fetch", "retract", "stop", "touch"]
CONTROL_WORDS = ["if", "then", "else", "IMAGINE", "T", "F", "initial", "predict", "t2"]
QUERY_WORDS = ["pain?", "condition?", "did?", "sequence?"]
AUX_WORDS = ["what", "you"]
PAIN_WORDS = ["very", "painful", "no", "pain"]
MARKER_WORDS = [",", "none", "arm", "square"]

FILLER_WORDS = [
    "bafo", "begu", "cida", "dopa", "etun", "fima", "gona", "hepi",
    "ilor", "jaku", "kemo", "lani", "mopu", "nifa", "olem", "pagu",
    "quvi", "ronu", "sabi", "tela", "ujod", "vika", "wolo", "xanu",
    "yemi", "zubo", "akel", "brio", "calo", "drev", "enzo", "frip",
    "galo", "hima", "ivek", "julo", "kipa", "losu", "meno", "nula",
    "opri", "pelo", "qado", "rilu", "sumo", "tiva", "uvel", "wabe",
]

# wrong pronunciation -> intended word
CONFUSION_PAIRS = {
    "kou": "you",
    "pian": "pain",
    "beeg": "big",
    "smol": "small",
    "reech": "reach",
    "stap": "stop",
}


class UtteranceTooLong(ValueError):
    """Utterance exceeds the streaming length bound."""


@dataclass(frozen=True)
class Utterance:
    """Ordered tokens plus their spectrum frames."""

    tokens: tuple[str, ...]

    def __post_init__(self):
        if len(self.tokens) > config.MAX_UTTERANCE:
            raise UtteranceTooLong(f"{len(self.tokens)} tokens > {config.MAX_UTTERANCE}")

    def text(self) -> str:
        return " ".join(self.tokens)

    @staticmethod
    def parse(text: str) -> "Utterance":
        return Utterance(tuple(text.split()))


def _frame_for(word: str, seed: int) -> np.ndarray:
    # fixed norm sqrt(dim): unit variance per entry, wide snapping margins
    rng = named_rng(f"frame/{word}/{seed}", 0)
    v = rng.normal(size=config.FRAME_DIM)
    return (v * (np.sqrt(config.FRAME_DIM) / np.linalg.norm(v))).astype(np.float64)


class Lexicon:
    """Bijective word <-> frame table plus the confusion mapping."""

    def __init__(self, word_seeds: dict[str, int], confusion: dict[str, str]):
        self.words = list(word_seeds)
        self.confusion = dict(confusion)
        self._frames: dict[str, np.ndarray] = {
            word: _frame_for(word, seed) for word, seed in word_seeds.items()
        }
        for wrong in confusion:
            if confusion[wrong] not in self._frames:
                raise ValueError(f"confusion target {confusion[wrong]!r} not in lexicon")
        self._snap_words = list(self._frames)
        self._snap_matrix = np.stack([self._frames[w] for w in self._snap_words])
        self.reverse_confusion = {right: wrong for wrong, right in confusion.items()}

    def __contains__(self, word: str) -> bool:
        return word in self._frames

    def frame(self, word: str) -> np.ndarray:
        if word not in self._frames:
            raise KeyError(f"word {word!r} has no frame")
        return self._frames[word]

    def frames_of(self, tokens) -> np.ndarray:
        return np.stack([self.frame(t) for t in tokens])

    def snap(self, frame: np.ndarray) -> str:
        """Nearest table word for a predicted frame."""
        d = self._snap_matrix - np.asarray(frame)[None, :]
        return self._snap_words[int(np.argmin(np.einsum("ij,ij->i", d, d)))]

    def vocabulary_ok(self, tokens) -> bool:
        return all(t in self._frames for t in tokens)

    def min_pairwise_distance(self) -> float:
        m = self._snap_matrix
        d2 = ((m[:, None, :] - m[None, :, :]) ** 2).sum(-1)
        np.fill_diagonal(d2, np.inf)
        return float(np.sqrt(d2.min()))


def default_word_seeds() -> dict[str, int]:
    words = (COLOR_WORDS + SIZE_WORDS + ACTION_WORDS + CONTROL_WORDS + QUERY_WORDS
             + AUX_WORDS + PAIN_WORDS + MARKER_WORDS + FILLER_WORDS
             + list(CONFUSION_PAIRS) + [END])
    assert len(words) == len(set(words)), "duplicate lexicon word"
    return {word: i + 1 for i, word in enumerate(words)}


def default_lexicon() -> Lexicon:
    return Lexicon(default_word_seeds(), CONFUSION_PAIRS)


def save_lexicon(lexicon: Lexicon, path: str | Path) -> None:
    """word <seed> [<confusion-target>] per line."""
    seeds = default_word_seeds()
    lines = []
    for word in lexicon.words:
        target = lexicon.confusion.get(word, "")
        lines.append(f"{word} {seeds.get(word, 1)} {target}".rstrip())
    Path(path).write_text("\n".join(lines) + "\n")


def load_lexicon(path: str | Path) -> Lexicon:
    word_seeds: dict[str, int] = {}
    confusion: dict[str, str] = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        word_seeds[parts[0]] = int(parts[1])
        if len(parts) > 2:
            confusion[parts[0]] = parts[2]
    return Lexicon(word_seeds, confusion)


def corrupt_utterance(utterance: Utterance, rate: float, seed: int,
                      lexicon: Lexicon | None = None) -> Utterance:
    """Swap words for their confusion-set partners at the given rate."""
    if not 0.0 <= rate <= 1.0:
        raise ValueError(f"rate must be in [0,1], got {rate}")
    lexicon = lexicon or default_lexicon()
    rng = named_rng(f"corrupt/{seed}", seed)
    tokens = []
    for token in utterance.tokens:
        wrong = lexicon.reverse_confusion.get(token)
        if wrong is not None and rng.random() < rate:
            tokens.append(wrong)
        else:
            tokens.append(token)
    return Utterance(tuple(tokens))
