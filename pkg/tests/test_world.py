import numpy as np
import pytest

from lgma import config
from lgma.world import (
    ActuatorOutOfRange,
    ArmState,
    UnknownObject,
    WorldObject,
    WorldState,
    forward_kinematics,
    label_displacement,
    parse_scenario,
    render_scene,
    sense_pain,
    square_distance,
    step_world,
    world_hash,
)
from lgma.world.render import arm_layer, square_layer
from lgma.world.scenario import build_world
from lgma.world.state import COLOR_RGB, Trajectory


def _world(objects=(), arm=None):
    return WorldState(arm=arm or ArmState(), objects=list(objects))


def _obj(color="red", size="big", center=(1.0, 0.0), oid="obj0", vel=(0, 0)):
    return WorldObject(id=oid, color=color, size=size,
                       center=np.array(center, dtype=float),
                       velocity=np.array(vel, dtype=float))


def test_step_fixed_point():
    w = _world()
    w2 = step_world(w, 0.0, 0.0, 0)
    assert w2.arm.theta0 == w.arm.theta0 and w2.arm.theta1 == w.arm.theta1
    assert w2.tick == w.tick + 1


def test_actuator_clamp():
    with pytest.raises(ActuatorOutOfRange):
        step_world(_world(), 2.5, 0.0, 0)
    with pytest.raises(ActuatorOutOfRange):
        step_world(_world(), np.nan, 0.0, 0)


def test_grasp_within_radius():
    hand = forward_kinematics(0.0, 0.0)
    obj = _obj(color="blue", center=hand + np.array([0.05 + obj_half(), 0.0]))
    w = _world([obj])
    w2 = step_world(w, 0.0, 0.0, 1)
    assert w2.held == "obj0"
    assert w2.arm.hold == 1
    # held object tracks the hand with a constant offset
    offset = w2.object_by_id("obj0").center - forward_kinematics(
        w2.arm.theta0, w2.arm.theta1)
    w3 = step_world(w2, 0.1, -0.05, 1)
    offset3 = w3.object_by_id("obj0").center - forward_kinematics(
        w3.arm.theta0, w3.arm.theta1)
    assert np.linalg.norm(offset3 - offset) <= 1e-9
    # release
    w4 = step_world(w3, 0.0, 0.0, 0)
    assert w4.held is None and w4.arm.hold == 0


def obj_half():
    return config.BIG_SIDE / 2


def test_grasp_out_of_radius_grabs_air():
    obj = _obj(color="blue", center=(0.0, 1.5))
    w = _world([obj])
    w2 = step_world(w, 0.0, 0.0, 1)
    assert w2.held is None and w2.arm.hold == 1


def test_pain_rules():
    hand = forward_kinematics(0.0, 0.0)
    near = _obj(center=hand + np.array([config.BIG_SIDE / 2 + 0.04, 0.0]))
    assert sense_pain(_world([near])) == 1.0
    far = _obj(center=(0.5, 1.5))  # ~1.6 units from the hand at (2, 0)
    assert sense_pain(_world([far])) == 0.0
    green = _obj(color="green", center=hand)
    assert sense_pain(_world([green])) == 0.0


def test_pain_locality_only_hot_objects_matter():
    hand = forward_kinematics(0.0, 0.0)
    hot = _obj(center=(0.0, 1.5))
    cold = _obj(color="green", size="small", center=hand, oid="obj1")
    w = _world([hot, cold])
    assert sense_pain(w) == 0.0
    # moving the non-hot object never changes pain
    cold.center = np.array([0.0, -1.5])
    assert sense_pain(w) == 0.0


def test_square_distance_inside_zero():
    assert square_distance(np.array([1.0, 0.0]), np.array([1.0, 0.0]), 0.15) == 0.0
    assert square_distance(np.array([1.2, 0.0]), np.array([1.0, 0.0]),
                           0.15) == pytest.approx(0.05)


def test_object_drift_and_workspace_clamp():
    obj = _obj(color="cyan", center=(2.1, 0.0), vel=(0.2, 0.0))
    w = _world([obj])
    w2 = step_world(w, 0.0, 0.0, 0)
    assert np.linalg.norm(w2.object_by_id("obj0").center) <= config.WORKSPACE_RADIUS + 1e-12


def test_render_empty_objects_only():
    img = render_scene(_world(), "objects_only")
    assert img.shape == (64, 64, 3)
    assert img.max() == 0.0


def test_render_deterministic():
    w = _world([_obj(), _obj(color="blue", size="small", center=(0, 1.2), oid="obj1")])
    a = render_scene(w, "all")
    b = render_scene(w, "all")
    assert np.array_equal(a, b)


def test_render_arm_plus_union():
    obj0 = _obj(color="yellow", center=(0.9, 0.9))
    obj1 = _obj(color="blue", size="small", center=(-0.9, -0.9), oid="obj1")
    w = _world([obj0, obj1], arm=ArmState(theta0=0.5, theta1=0.7))
    composite = render_scene(w, "arm_plus", "obj0")
    # union of the independent per-primitive rasterizations
    arm = arm_layer(0.5, 0.7)
    square = square_layer(obj0.center, obj0.half_side, COLOR_RGB["yellow"])
    expected = np.clip(np.maximum(arm, square), 0.0, 1.0).astype(np.float32)
    assert np.array_equal(composite, expected)
    # the other object contributes nothing
    assert not np.array_equal(composite, render_scene(w, "all"))


def test_render_unknown_object():
    with pytest.raises(UnknownObject):
        render_scene(_world(), "arm_plus", "nope")


def test_label_displacement():
    traj = Trajectory((ArmState(),))
    home = (0.0, 0.0)
    assert label_displacement(traj, (1.5, 0), (0.5, 0), home) == "pull"
    assert label_displacement(traj, (0.5, 0), (1.5, 0), home) == "push"
    assert label_displacement(traj, (1.0, 0), (1.0, 0), home) == "touch"
    assert label_displacement(traj, (1.0, 0), (1.04, 0), home) == "touch"


def test_scenario_parse_and_build():
    text = """
    # demo scenario
    arm 0.3 1.1
    object red big 1.0 0.2
    object blue small -0.5 0.9 0.01 0.0
    say fetch big
    say stop
    """
    sc = parse_scenario(text)
    assert sc.arm_theta == (0.3, 1.1)
    assert len(sc.objects) == 2 and sc.says == ["fetch big", "stop"]
    world = build_world(sc)
    assert world.objects[1].velocity[0] == 0.01
    assert world.arm.pain == 0.0


def test_scenario_rejects_unknown_directive():
    with pytest.raises(ValueError):
        parse_scenario("teleport 1 2")


def test_world_hash_sensitivity():
    w = _world([_obj()])
    h1 = world_hash(w)
    assert h1 == world_hash(w.clone())
    w2 = step_world(w, 0.1, 0.0, 0)
    assert world_hash(w2) != h1
