"""Deterministic 2-link arm world: kinematics, physics, rendering, planning."""

from lgma.world.state import ArmState, Trajectory, WorldObject, WorldState, world_hash
from lgma.world.kinematics import Unreachable, forward_kinematics, inverse_kinematics
from lgma.world.planner import plan_block, plan_straight_reach, rollout_plan, smooth_step
from lgma.world.physics import ActuatorOutOfRange, sense_pain, square_distance, step_world
from lgma.world.render import UnknownObject, render_scene
from lgma.world.labels import label_displacement
from lgma.world.scenario import Scenario, build_world, parse_scenario

__all__ = [
    "ActuatorOutOfRange",
    "ArmState",
    "Scenario",
    "Trajectory",
    "UnknownObject",
    "Unreachable",
    "WorldObject",
    "WorldState",
    "build_world",
    "forward_kinematics",
    "inverse_kinematics",
    "label_displacement",
    "parse_scenario",
    "plan_block",
    "plan_straight_reach",
    "render_scene",
    "rollout_plan",
    "sense_pain",
    "smooth_step",
    "square_distance",
    "step_world",
    "world_hash",
]
