"""Sensory codecs: lexicon/spectrum frames, vision, language, somatosensorimotor."""

from lgma.codecs.lexicon import (
    Lexicon,
    Utterance,
    UtteranceTooLong,
    corrupt_utterance,
    default_lexicon,
)
from lgma.codecs.vision import NotTrained, VisionCodec
from lgma.codecs.language import LanguageCodec
from lgma.codecs.soma import SomaCodec

__all__ = [
    "LanguageCodec",
    "Lexicon",
    "NotTrained",
    "SomaCodec",
    "Utterance",
    "UtteranceTooLong",
    "VisionCodec",
    "corrupt_utterance",
    "default_lexicon",
]
