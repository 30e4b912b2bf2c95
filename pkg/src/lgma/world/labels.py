"""Ground-truth action labelling for the sensorimotor-to-language trainer."""
from __future__ import annotations

import numpy as np

from lgma import config
from lgma.world.state import Trajectory


def label_displacement(traj: Trajectory, obj_before, obj_after, home) -> str:
    """'pull' if the object moved toward home, 'push' if away, else 'touch'.

    Dead-zone of 0.05 on the change in home distance.
    """
    home = np.asarray(home, dtype=np.float64)
    before = float(np.linalg.norm(np.asarray(obj_before, dtype=np.float64) - home))
    after = float(np.linalg.norm(np.asarray(obj_after, dtype=np.float64) - home))
    if after < before - config.DISPLACE_DEADZONE:
        return "pull"
    if after > before + config.DISPLACE_DEADZONE:
        return "push"
    return "touch"
