import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lgma import config
from lgma.world import (
    Unreachable,
    WorldState,
    forward_kinematics,
    inverse_kinematics,
    plan_straight_reach,
    rollout_plan,
    smooth_step,
)
from lgma.world.kinematics import elbow_branch, unwrap_toward
from lgma.world.planner import plan_block, stop_block
from lgma.world.state import ArmState


def test_fk_known_poses():
    assert np.allclose(forward_kinematics(0, 0), [2.0, 0.0])
    assert np.allclose(forward_kinematics(np.pi / 2, 0), [0.0, 2.0])
    assert np.allclose(forward_kinematics(np.pi / 2, -np.pi / 2), [1.0, 1.0])


def test_ik_known_poses():
    t0, t1 = inverse_kinematics((2, 0), 1)
    assert abs(t0) < 1e-12 and abs(t1) < 1e-12
    t0, t1 = inverse_kinematics((1, 1), -1)
    assert np.allclose((t0, t1), (np.pi / 2, -np.pi / 2))


def test_ik_unreachable():
    with pytest.raises(Unreachable):
        inverse_kinematics((3, 0), 1)
    with pytest.raises(Unreachable):
        inverse_kinematics((0, 0), 1)


@settings(max_examples=200, deadline=None)
@given(r=st.floats(0.02, 2.0), a=st.floats(-np.pi, np.pi),
       sign=st.sampled_from([1, -1]))
def test_ik_fk_round_trip(r, a, sign):
    p = np.array([r * np.cos(a), r * np.sin(a)])
    t0, t1 = inverse_kinematics(p, sign)
    assert np.linalg.norm(forward_kinematics(t0, t1) - p) <= 1e-9
    assert abs(t1) <= np.pi + 1e-12
    if t1 != 0:
        assert np.sign(t1) == sign


def test_elbow_branch_of_unwrapped_angle():
    # 3.5 rad is the -1 branch seen through a 2*pi shift
    assert elbow_branch(3.5) == -1
    assert elbow_branch(1.0) == 1
    assert unwrap_toward(-2.78, 3.5) == pytest.approx(-2.78 + 2 * np.pi)


def test_smooth_step_endpoints():
    assert smooth_step(0.0) == 0.0
    assert smooth_step(1.0) == 1.0
    assert smooth_step(0.5) == 0.5


def test_null_reach_all_zero():
    traj = plan_straight_reach((1.2, 0.4), (1.2, 0.4), 4)
    m = traj.matrix()
    assert np.all(m[:, [1, 2, 4, 5]] == 0)
    assert np.allclose(m[:, 0], m[0, 0]) and np.allclose(m[:, 3], m[0, 3])


def test_reach_endpoint_stillness_and_replay():
    rng = np.random.default_rng(3)
    for _ in range(25):
        p0 = rng.uniform(-1.2, 1.2, 2)
        p1 = rng.uniform(-1.2, 1.2, 2)
        if min(np.linalg.norm(p0), np.linalg.norm(p1)) < 0.3:
            continue
        T = int(rng.integers(3, 14))
        try:
            traj = plan_straight_reach(p0, p1, T)
        except Unreachable:
            continue
        if np.abs(traj.alphas()).max() > config.ALPHA_MAX:
            continue  # too aggressive for the actuator clamp
        first, last = traj.steps[0], traj.steps[-1]
        assert first.omega0 == 0 and first.omega1 == 0
        assert last.omega0 == 0 and last.omega1 == 0
        world = WorldState(arm=first)
        w2, executed = rollout_plan(world, traj)
        assert np.abs(traj.matrix()[:, [0, 3]]
                      - executed.matrix()[:, [0, 3]]).max() <= 1e-6
        hand = forward_kinematics(w2.arm.theta0, w2.arm.theta1)
        assert np.linalg.norm(hand - p1) <= 1e-6


def test_reach_waypoints_on_segment():
    traj = plan_straight_reach((1.5, 0.0), (0.0, 1.5), 9)
    p0, p1 = np.array([1.5, 0.0]), np.array([0.0, 1.5])
    d = p1 - p0
    for s in traj.steps:
        h = forward_kinematics(s.theta0, s.theta1)
        u = np.dot(h - p0, d) / np.dot(d, d)
        assert -1e-9 <= u <= 1 + 1e-9
        assert np.linalg.norm(p0 + u * d - h) < 1e-8


def test_t2_with_motion_rejected():
    with pytest.raises(ValueError):
        plan_straight_reach((1.0, 0.0), (0.5, 0.5), 2)


def test_unreachable_waypoint():
    # T=4 places a waypoint exactly at s=0.5, i.e. the origin singularity
    with pytest.raises(Unreachable):
        plan_straight_reach((1.9, 0.0), (-1.9, 0.0), 4)


def test_plan_block_moving_start_ends_at_rest():
    arm = ArmState(theta0=0.3, theta1=0.8, omega0=0.4, omega1=-0.2)
    block = plan_block(arm, (1.0, 0.2))
    last = block.steps[-1]
    assert last.omega0 == 0 and last.omega1 == 0
    assert last.theta0 == pytest.approx(1.0) and last.theta1 == pytest.approx(0.2)
    world = WorldState(arm=arm)
    w2, _ = rollout_plan(world, block)
    assert w2.arm.theta0 == pytest.approx(1.0, abs=1e-9)
    assert w2.arm.omega0 == pytest.approx(0.0, abs=1e-12)


def test_stop_block_reaches_rest():
    arm = ArmState(theta0=0.1, theta1=-0.5, omega0=1.2, omega1=-0.7)
    block = stop_block(arm)
    world = WorldState(arm=arm)
    w2, _ = rollout_plan(world, block)
    assert abs(w2.arm.omega0) < 1e-12 and abs(w2.arm.omega1) < 1e-12
