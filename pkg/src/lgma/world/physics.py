"""World stepping: semi-implicit Euler, holding, contact pain."""
from __future__ import annotations

import numpy as np

from lgma import config
from lgma.world.kinematics import forward_kinematics
from lgma.world.state import ArmState, WorldState


class ActuatorOutOfRange(ValueError):
    """Commanded acceleration violates the actuator clamp."""


def square_distance(point: np.ndarray, center: np.ndarray, half_side: float) -> float:
    """Euclidean distance from a point to an axis-aligned square region (0 inside)."""
    d = np.abs(np.asarray(point) - np.asarray(center)) - half_side
    d = np.maximum(d, 0.0)
    return float(np.hypot(d[0], d[1]))


def sense_pain(world: WorldState) -> float:
    """1.0 iff the hand is within the contact radius of a hot object's square."""
    hand = forward_kinematics(world.arm.theta0, world.arm.theta1)
    for obj in world.objects:
        if not obj.hot:
            continue
        if square_distance(hand, obj.center, obj.half_side) <= config.CONTACT_RADIUS:
            return 1.0
    return 0.0


def nearest_object(world: WorldState, hand: np.ndarray):
    """Closest object by hand-to-square-region distance, or None."""
    best = None
    best_d = np.inf
    for obj in world.objects:
        d = square_distance(hand, obj.center, obj.half_side)
        if d < best_d:
            best, best_d = obj, d
    return best, best_d


def _clamp_to_workspace(center: np.ndarray) -> np.ndarray:
    r = np.linalg.norm(center)
    if r > config.WORKSPACE_RADIUS:
        return center * (config.WORKSPACE_RADIUS / r)
    return center


def step_world(world: WorldState, alpha0: float, alpha1: float, hold_cmd: int) -> WorldState:
    """One integrator step: omega += alpha, theta += omega, then hold/pain rules."""
    if not (np.isfinite(alpha0) and np.isfinite(alpha1)):
        raise ActuatorOutOfRange("non-finite acceleration command")
    if abs(alpha0) > config.ALPHA_MAX or abs(alpha1) > config.ALPHA_MAX:
        raise ActuatorOutOfRange(
            f"|alpha|=({abs(alpha0):.3f},{abs(alpha1):.3f}) exceeds {config.ALPHA_MAX}")
    if hold_cmd not in (0, 1):
        raise ValueError(f"hold_cmd must be 0 or 1, got {hold_cmd}")

    arm = world.arm
    omega0 = arm.omega0 + alpha0
    omega1 = arm.omega1 + alpha1
    theta0 = arm.theta0 + omega0
    theta1 = arm.theta1 + omega1
    hand = forward_kinematics(theta0, theta1)

    out = world.clone()

    # free objects drift; the held one tracks the hand at a constant offset
    for obj in out.objects:
        if world.held == obj.id and arm.hold == 1 and hold_cmd == 1:
            obj.center = hand + world.held_offset
        elif np.any(obj.velocity != 0.0):
            obj.center = _clamp_to_workspace(obj.center + obj.velocity)

    if arm.hold == 0 and hold_cmd == 1:
        candidate, dist = nearest_object(out, hand)
        if candidate is not None and dist <= config.GRASP_RADIUS:
            out.held = candidate.id
            out.held_offset = candidate.center - hand
        else:
            out.held = None
            out.held_offset = None
    elif hold_cmd == 0:
        out.held = None
        out.held_offset = None

    out.arm = ArmState(
        theta0=theta0, theta1=theta1,
        omega0=omega0, omega1=omega1,
        alpha0=alpha0, alpha1=alpha1,
        hold=hold_cmd, pain=0.0,
    )
    pain = sense_pain(out)
    out.arm = ArmState(
        theta0=theta0, theta1=theta1,
        omega0=omega0, omega1=omega1,
        alpha0=alpha0, alpha1=alpha1,
        hold=hold_cmd, pain=pain,
    )
    out.tick = world.tick + 1
    return out
