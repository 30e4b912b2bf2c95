"""Command-conditioned action synthesis.

Input sequence: [command lv, cognitive-map vv, current sv, episode-start sv];
output: the action sv whose decoded 4-step actuation realizes the command.
The start sv carries the pose 'retract' returns to; the current sv carries the
velocity 'stop' must cancel.
"""
from __future__ import annotations

import numpy as np

from lgma import config
from lgma.cortex.base import SeqRegressor


class NoAttendedObject(ValueError):
    """Object-relative command issued with no attended object."""


class SMA:
    def __init__(self, rng: np.random.Generator | None = None):
        self.net = SeqRegressor("sma", config.MODAL_DIM,
                                {"sv": (config.MODAL_DIM, "tanh")}, rng)

    def act(self, command_lv: np.ndarray, map_vv: np.ndarray,
            current_sv: np.ndarray, start_sv: np.ndarray) -> np.ndarray:
        self.net.require_trained()
        seq = np.stack([command_lv, map_vv, current_sv, start_sv]).astype(np.float32)
        return self.net.infer_final(seq)["sv"]
