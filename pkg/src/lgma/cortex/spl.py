"""Egocentric fusion: attended-object vv + arm sv -> cognitive-map vv.

The trained net synthesizes the arm's visual code from the somatosensory
vector; fusion composes the decoded object and synthesized arm images and
re-encodes through the visual codec (the decoder feedback path).
"""
from __future__ import annotations

import numpy as np

from lgma import config
from lgma.codecs.vision import VisionCodec
from lgma.cortex.base import SeqRegressor


class SPL:
    def __init__(self, vision: VisionCodec | None = None,
                 rng: np.random.Generator | None = None):
        self.vision = vision
        self.net = SeqRegressor("spl", config.MODAL_DIM,
                                {"armcode": (config.MODAL_DIM, "tanh")}, rng)

    def arm_code(self, arm_sv: np.ndarray) -> np.ndarray:
        """Visual code of the arm alone, synthesized from the arm state."""
        self.net.require_trained()
        return self.net.infer_final(arm_sv[None].astype(np.float32))["armcode"]

    def fuse(self, object_vv: np.ndarray, arm_sv: np.ndarray) -> np.ndarray:
        self.net.require_trained()
        if self.vision is None:
            raise RuntimeError("spl needs the vision codec to compose images")
        arm_img = self.vision.decode(self.arm_code(arm_sv))
        obj_img = self.vision.decode(object_vv)
        fused = np.maximum(arm_img, obj_img)
        return self.vision.encode(fused)
