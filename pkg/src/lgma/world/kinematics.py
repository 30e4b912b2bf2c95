"""Closed-form 2-link kinematics, unit link lengths."""
from __future__ import annotations

import numpy as np

from lgma import config


class Unreachable(ValueError):
    """Target outside the reachable annulus."""


def forward_kinematics(theta0: float, theta1: float) -> np.ndarray:
    """Hand position for shoulder angle theta0 and relative elbow angle theta1."""
    x = config.LINK0 * np.cos(theta0) + config.LINK1 * np.cos(theta0 + theta1)
    y = config.LINK0 * np.sin(theta0) + config.LINK1 * np.sin(theta0 + theta1)
    return np.array([x, y])


def elbow_position(theta0: float) -> np.ndarray:
    return np.array([config.LINK0 * np.cos(theta0), config.LINK0 * np.sin(theta0)])


def inverse_kinematics(p, elbow_sign: int = 1) -> tuple[float, float]:
    """Joint angles reaching p; elbow_sign picks the theta1 branch."""
    p = np.asarray(p, dtype=np.float64)
    r2 = float(p @ p)
    reach = config.LINK0 + config.LINK1
    if r2 == 0.0:
        raise Unreachable("origin is a kinematic singularity")
    if r2 > reach * reach + 1e-9:
        raise Unreachable(f"|p|={np.sqrt(r2):.6f} beyond reach {reach}")
    if elbow_sign not in (1, -1):
        raise ValueError("elbow_sign must be +1 or -1")
    cos_t1 = np.clip((r2 - 2.0) / 2.0, -1.0, 1.0)
    theta1 = elbow_sign * float(np.arccos(cos_t1))
    theta0 = float(np.arctan2(p[1], p[0])
                   - np.arctan2(np.sin(theta1), 1.0 + np.cos(theta1)))
    return theta0, theta1


def elbow_branch(theta1: float) -> int:
    """Elbow branch of an arbitrary (possibly unwrapped) elbow angle."""
    s = np.sin(theta1)
    return 1 if s >= 0 else -1


def unwrap_toward(angle: float, reference: float) -> float:
    """Shift angle by multiples of 2*pi to land within pi of reference."""
    two_pi = 2.0 * np.pi
    k = np.round((reference - angle) / two_pi)
    return float(angle + k * two_pi)
