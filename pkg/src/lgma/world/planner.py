"""Reach planning.

Trajectory convention: row 0 is the start state (alpha_0 = 0); row k follows
from row k-1 under the integrator, so executing a trajectory applies rows
1..T-1. Planned reaches start and end at rest.
"""
from __future__ import annotations

import numpy as np

from lgma import config
from lgma.world.kinematics import (
    Unreachable,
    elbow_branch,
    forward_kinematics,
    inverse_kinematics,
    unwrap_toward,
)
from lgma.world.physics import step_world
from lgma.world.state import ArmState, Trajectory, WorldState


def smooth_step(u: float) -> float:
    """3u^2 - 2u^3: zero slope at both ends."""
    return u * u * (3.0 - 2.0 * u)


def plan_straight_reach(p_start, p_goal, T: int, elbow_sign: int = 1,
                        theta_ref: tuple[float, float] | None = None) -> Trajectory:
    """Hand-straight reach with the smooth-step profile and still endpoints.

    theta_ref, when given, is the raw current pose; row 0 is pinned to it and
    the elbow branch follows it.
    """
    p_start = np.asarray(p_start, dtype=np.float64)
    p_goal = np.asarray(p_goal, dtype=np.float64)
    if T < 2:
        raise ValueError("T must be >= 2")
    delta = p_goal - p_start
    moving = bool(np.linalg.norm(delta) > 0.0)
    if moving and T < 3:
        raise ValueError("a non-null reach cannot end at rest with T < 3")

    if theta_ref is not None:
        elbow_sign = elbow_branch(theta_ref[1])

    # final two samples coincide so the last step carries zero velocity
    if moving:
        fractions = [min(k / (T - 2), 1.0) for k in range(T)]
    else:
        fractions = [0.0] * T

    thetas = np.zeros((T, 2))
    prev: tuple[float, float] | None = None
    for k, v in enumerate(fractions):
        p = p_start + smooth_step(v) * delta
        r = np.linalg.norm(p)
        if r == 0.0 or r > config.LINK0 + config.LINK1 + 1e-9:
            raise Unreachable(f"waypoint {k} at radius {r:.6f} leaves the annulus")
        t0, t1 = inverse_kinematics(p, elbow_sign)
        if k == 0 and theta_ref is not None:
            t0, t1 = theta_ref
        elif prev is not None:
            t0 = unwrap_toward(t0, prev[0])
            t1 = unwrap_toward(t1, prev[1])
        thetas[k] = (t0, t1)
        prev = (t0, t1)

    omegas = np.zeros((T, 2))
    omegas[1:] = np.diff(thetas, axis=0)
    alphas = np.zeros((T, 2))
    alphas[1:] = np.diff(omegas, axis=0)
    steps = [
        ArmState(theta0=thetas[k, 0], theta1=thetas[k, 1],
                 omega0=omegas[k, 0], omega1=omegas[k, 1],
                 alpha0=alphas[k, 0], alpha1=alphas[k, 1])
        for k in range(T)
    ]
    return Trajectory(tuple(steps))


def plan_block(arm: ArmState, theta_goal: tuple[float, float],
               hold_seq=None) -> Trajectory:
    """4-row atomic block in angle space, ending at rest on theta_goal.

    Handles moving starts: velocity profile [w0, d/2, d/2, 0]. theta_goal is
    unwrapped toward the current pose.
    """
    t0 = unwrap_toward(theta_goal[0], arm.theta0)
    t1 = unwrap_toward(theta_goal[1], arm.theta1)
    d = np.array([t0 - arm.theta0, t1 - arm.theta1])
    w0 = np.array([arm.omega0, arm.omega1])
    omegas = np.array([w0, d / 2.0, d / 2.0, np.zeros(2)])
    thetas = np.array([arm.theta0, arm.theta1]) + np.vstack(
        [np.zeros(2), np.cumsum(omegas[1:], axis=0)])
    alphas = np.zeros((config.BLOCK_T, 2))
    alphas[0] = (arm.alpha0, arm.alpha1)
    alphas[1:] = np.diff(omegas, axis=0)
    if hold_seq is None:
        hold_seq = [arm.hold] * config.BLOCK_T
    steps = [
        ArmState(theta0=thetas[k, 0], theta1=thetas[k, 1],
                 omega0=omegas[k, 0], omega1=omegas[k, 1],
                 alpha0=alphas[k, 0], alpha1=alphas[k, 1],
                 hold=int(hold_seq[k]), pain=arm.pain if k == 0 else 0.0)
        for k in range(config.BLOCK_T)
    ]
    return Trajectory(tuple(steps))


def stop_block(arm: ArmState) -> Trajectory:
    """Proportional deceleration to rest: velocity profile [w0, w0/2, w0/4, 0]."""
    w0 = np.array([arm.omega0, arm.omega1])
    omegas = np.array([w0, w0 / 2.0, w0 / 4.0, np.zeros(2)])
    thetas = np.array([arm.theta0, arm.theta1]) + np.vstack(
        [np.zeros(2), np.cumsum(omegas[1:], axis=0)])
    alphas = np.zeros((config.BLOCK_T, 2))
    alphas[0] = (arm.alpha0, arm.alpha1)
    alphas[1:] = np.diff(omegas, axis=0)
    steps = [
        ArmState(theta0=thetas[k, 0], theta1=thetas[k, 1],
                 omega0=omegas[k, 0], omega1=omegas[k, 1],
                 alpha0=alphas[k, 0], alpha1=alphas[k, 1],
                 hold=arm.hold, pain=arm.pain if k == 0 else 0.0)
        for k in range(config.BLOCK_T)
    ]
    return Trajectory(tuple(steps))


def rollout_plan(world: WorldState, traj: Trajectory) -> tuple[WorldState, Trajectory]:
    """Execute a planned trajectory's actuation in the world.

    Returns the final world and the executed trajectory (with true hold/pain
    columns). The world's arm must match the plan's row 0 pose.
    """
    executed = [world.arm]
    current = world
    for step in traj.steps[1:]:
        current = step_world(current, step.alpha0, step.alpha1, step.hold)
        executed.append(current.arm)
    return current, Trajectory(tuple(executed))
