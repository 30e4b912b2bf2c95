"""Lesion masks: forced zeroing of chosen output activations."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from lgma import config
from lgma.config import named_rng


@dataclass(frozen=True)
class LesionMask:
    """keep[i] = 0 silences position i; exactly n zeros."""

    keep: np.ndarray
    n: int

    @staticmethod
    def none() -> "LesionMask":
        return LesionMask(np.ones(config.MODAL_DIM, dtype=np.float32), 0)

    @staticmethod
    def random(n: int, seed: int) -> "LesionMask":
        if not 0 <= n <= config.MODAL_DIM:
            raise ValueError(f"lesion count {n} outside [0, {config.MODAL_DIM}]")
        keep = np.ones(config.MODAL_DIM, dtype=np.float32)
        idx = named_rng(f"lesion/{n}", seed).choice(config.MODAL_DIM, size=n, replace=False)
        keep[idx] = 0.0
        return LesionMask(keep, n)

    def apply(self, lv: np.ndarray) -> np.ndarray:
        return lv * self.keep
