"""Scenario files: one directive per line.

    object <color> <size> <x> <y> [vx vy]
    arm <theta0> <theta1>
    say <utterance>
    # comment
"""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from lgma.world.state import ArmState, WorldObject, WorldState


@dataclass
class Scenario:
    arm_theta: tuple[float, float] = (0.4, 0.9)
    objects: list[tuple[str, str, float, float, float, float]] = field(default_factory=list)
    says: list[str] = field(default_factory=list)


def parse_scenario(text: str) -> Scenario:
    scenario = Scenario()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        directive = parts[0]
        if directive == "object":
            if len(parts) not in (5, 7):
                raise ValueError(f"line {lineno}: object <color> <size> <x> <y> [vx vy]")
            color, size = parts[1], parts[2]
            x, y = float(parts[3]), float(parts[4])
            vx, vy = (float(parts[5]), float(parts[6])) if len(parts) == 7 else (0.0, 0.0)
            scenario.objects.append((color, size, x, y, vx, vy))
        elif directive == "arm":
            if len(parts) != 3:
                raise ValueError(f"line {lineno}: arm <theta0> <theta1>")
            scenario.arm_theta = (float(parts[1]), float(parts[2]))
        elif directive == "say":
            utterance = line[len("say"):].strip()
            if not utterance:
                raise ValueError(f"line {lineno}: empty utterance")
            scenario.says.append(utterance)
        else:
            raise ValueError(f"line {lineno}: unknown directive {directive!r}")
    return scenario


def load_scenario(path: str | Path) -> Scenario:
    return parse_scenario(Path(path).read_text())


def build_world(scenario: Scenario) -> WorldState:
    from lgma.world.physics import sense_pain

    objects = [
        WorldObject(id=f"obj{i}", color=color, size=size,
                    center=np.array([x, y]), velocity=np.array([vx, vy]))
        for i, (color, size, x, y, vx, vy) in enumerate(scenario.objects)
    ]
    world = WorldState(
        arm=ArmState(theta0=scenario.arm_theta[0], theta1=scenario.arm_theta[1]),
        objects=objects,
    )
    pain = sense_pain(world)
    if pain:
        world.arm = ArmState(theta0=world.arm.theta0, theta1=world.arm.theta1, pain=pain)
    return world
