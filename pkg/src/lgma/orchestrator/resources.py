"""Lazy checkpoint loading shared by the session, generators, trainers, and eval."""
from __future__ import annotations

from pathlib import Path

import numpy as np

from lgma.codecs.language import LanguageCodec, WordCodebook
from lgma.codecs.lexicon import END, Lexicon, default_lexicon, load_lexicon
from lgma.codecs.soma import SomaCodec
from lgma.codecs.vision import VisionCodec
from lgma.config import Config, named_rng
from lgma.cortex import BA1440, MT, SPL, SMA, Broca, PreSMA, Wernicke

MODULE_NAMES = ["vision", "language", "soma", "wernicke", "broca", "mt", "spl",
                "ba1440", "presma", "sma"]


class MissingCheckpoint(FileNotFoundError):
    """A required module checkpoint has not been trained."""


class Resources:
    """Holds the lexicon and loads trained modules from the checkpoint directory."""

    def __init__(self, cfg: Config):
        self.cfg = cfg
        self.ckpt_dir = cfg.path("checkpoint_dir")
        lex_path = str(cfg["lexicon_path"])
        self.lexicon: Lexicon = load_lexicon(lex_path) if lex_path else default_lexicon()
        self._cache: dict[str, object] = {}

    def checkpoint_path(self, name: str) -> Path:
        return self.ckpt_dir / f"{name}.ckpt"

    def has_checkpoint(self, name: str) -> bool:
        return self.checkpoint_path(name).exists()

    def _load(self, name: str, build, needs_checkpoint: bool = True):
        if name in self._cache:
            return self._cache[name]
        obj = build()
        if needs_checkpoint:
            path = self.checkpoint_path(name)
            if not path.exists():
                raise MissingCheckpoint(f"checkpoint for {name!r} not found at {path}")
            obj.load(path) if hasattr(obj, "load") else None
        self._cache[name] = obj
        return obj

    # ------------------------------------------------------------------
    @property
    def vision(self) -> VisionCodec:
        return self._load("vision", lambda: VisionCodec())

    @property
    def language(self) -> LanguageCodec:
        return self._load("language", lambda: LanguageCodec(self.lexicon))

    @property
    def soma(self) -> SomaCodec:
        return self._load("soma", lambda: SomaCodec())

    @property
    def codebook(self) -> WordCodebook:
        if "codebook" not in self._cache:
            words = [w for w in self.lexicon.words if w not in self.lexicon.confusion]
            self._cache["codebook"] = WordCodebook(self.language, words)
        return self._cache["codebook"]

    @property
    def wernicke(self) -> Wernicke:
        if "wernicke" not in self._cache:
            module = Wernicke(self.language, self.codebook)
            self._require_net(module.net, "wernicke")
            self._cache["wernicke"] = module
        return self._cache["wernicke"]

    @property
    def broca(self) -> Broca:
        if "broca" not in self._cache:
            module = Broca(self.language, self.codebook)
            self._require_net(module.net, "broca")
            self._cache["broca"] = module
        return self._cache["broca"]

    @property
    def mt(self) -> MT:
        if "mt" not in self._cache:
            module = MT(self.vision, self.language, self.codebook)
            path = self.checkpoint_path("mt")
            if not path.exists():
                raise MissingCheckpoint(f"checkpoint for 'mt' not found at {path}")
            module.load(path)
            self._cache["mt"] = module
        return self._cache["mt"]

    @property
    def spl(self) -> SPL:
        if "spl" not in self._cache:
            module = SPL(self.vision)
            self._require_net(module.net, "spl")
            self._cache["spl"] = module
        return self._cache["spl"]

    @property
    def ba1440(self) -> BA1440:
        if "ba1440" not in self._cache:
            module = BA1440()
            self._require_net(module.net, "ba1440")
            self._cache["ba1440"] = module
        return self._cache["ba1440"]

    @property
    def presma(self) -> PreSMA:
        if "presma" not in self._cache:
            module = PreSMA(self.codebook)
            self._require_net(module.net, "presma")
            self._cache["presma"] = module
        return self._cache["presma"]

    @property
    def sma(self) -> SMA:
        if "sma" not in self._cache:
            module = SMA()
            self._require_net(module.net, "sma")
            self._cache["sma"] = module
        return self._cache["sma"]

    def _require_net(self, net, name: str) -> None:
        path = self.checkpoint_path(name)
        if not path.exists():
            raise MissingCheckpoint(f"checkpoint for {name!r} not found at {path}")
        net.load(path)

    # ------------------------------------------------------------------
    def rng(self, purpose: str) -> np.random.Generator:
        return named_rng(purpose, int(self.cfg["seed"]))
