"""Value types for the arm world."""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field, replace

import numpy as np

from lgma import config

COLOR_RGB = {
    "red": (1.0, 0.0, 0.0),
    "green": (0.0, 1.0, 0.0),
    "yellow": (1.0, 1.0, 0.0),
    "cyan": (0.0, 1.0, 1.0),
    "blue": (0.0, 0.0, 1.0),
}


@dataclass(frozen=True)
class ArmState:
    """Per-step arm state: joint angles, velocities, accelerations, hold, pain."""

    theta0: float = 0.0
    theta1: float = 0.0
    omega0: float = 0.0
    omega1: float = 0.0
    alpha0: float = 0.0
    alpha1: float = 0.0
    hold: int = 0
    pain: float = 0.0

    def __post_init__(self):
        values = (self.theta0, self.theta1, self.omega0, self.omega1,
                  self.alpha0, self.alpha1)
        if not all(np.isfinite(v) for v in values):
            raise ValueError("non-finite arm state")
        if self.hold not in (0, 1):
            raise ValueError(f"hold must be 0 or 1, got {self.hold}")
        if not 0.0 <= self.pain <= 1.0:
            raise ValueError(f"pain must be in [0,1], got {self.pain}")

    def row(self) -> np.ndarray:
        """8-dim row [theta0, omega0, alpha0, theta1, omega1, alpha1, hold, pain]."""
        return np.array(
            [self.theta0, self.omega0, self.alpha0,
             self.theta1, self.omega1, self.alpha1,
             float(self.hold), self.pain],
            dtype=np.float64,
        )

    @staticmethod
    def from_row(row: np.ndarray) -> "ArmState":
        return ArmState(
            theta0=float(row[0]), omega0=float(row[1]), alpha0=float(row[2]),
            theta1=float(row[3]), omega1=float(row[4]), alpha1=float(row[5]),
            hold=int(round(float(row[6]))), pain=float(np.clip(row[7], 0.0, 1.0)),
        )

    def normalized(self) -> "ArmState":
        """Wrap both joint angles into [-pi, pi]."""
        def wrap(a: float) -> float:
            return float(np.arctan2(np.sin(a), np.cos(a)))
        return replace(self, theta0=wrap(self.theta0), theta1=wrap(self.theta1))


@dataclass(frozen=True)
class Trajectory:
    """Ordered arm states; rows form the T x 8 state matrix."""

    steps: tuple[ArmState, ...]

    def __post_init__(self):
        if len(self.steps) < 1:
            raise ValueError("trajectory needs at least one step")

    def __len__(self) -> int:
        return len(self.steps)

    def matrix(self) -> np.ndarray:
        return np.stack([s.row() for s in self.steps])

    def alphas(self) -> np.ndarray:
        return np.array([(s.alpha0, s.alpha1) for s in self.steps])

    def holds(self) -> np.ndarray:
        return np.array([s.hold for s in self.steps])


@dataclass
class WorldObject:
    """Axis-aligned colored square; red squares are hot."""

    id: str
    color: str
    size: str
    center: np.ndarray
    velocity: np.ndarray = field(default_factory=lambda: np.zeros(2))

    def __post_init__(self):
        if self.color not in COLOR_RGB:
            raise ValueError(f"unknown color {self.color!r}")
        if self.size not in config.SIZES:
            raise ValueError(f"unknown size {self.size!r}")
        self.center = np.asarray(self.center, dtype=np.float64)
        self.velocity = np.asarray(self.velocity, dtype=np.float64)
        if np.linalg.norm(self.center) > config.WORKSPACE_RADIUS + 1e-9:
            raise ValueError("object outside workspace disc")

    @property
    def hot(self) -> bool:
        return self.color == "red"

    @property
    def half_side(self) -> float:
        side = config.BIG_SIDE if self.size == "big" else config.SMALL_SIDE
        return side / 2.0

    def clone(self) -> "WorldObject":
        return WorldObject(self.id, self.color, self.size,
                           self.center.copy(), self.velocity.copy())


@dataclass
class WorldState:
    """Arm + objects + holding linkage + tick; home is the shoulder origin."""

    arm: ArmState
    objects: list[WorldObject] = field(default_factory=list)
    held: str | None = None
    held_offset: np.ndarray | None = None
    tick: int = 0
    home: np.ndarray = field(default_factory=lambda: np.zeros(2))

    def object_by_id(self, object_id: str) -> WorldObject | None:
        for obj in self.objects:
            if obj.id == object_id:
                return obj
        return None

    def clone(self) -> "WorldState":
        return WorldState(
            arm=self.arm,
            objects=[o.clone() for o in self.objects],
            held=self.held,
            held_offset=None if self.held_offset is None else self.held_offset.copy(),
            tick=self.tick,
            home=self.home.copy(),
        )


def world_hash(world: WorldState) -> str:
    """Canonical digest of the full world state; used by imagery isolation checks."""
    h = hashlib.sha256()
    h.update(world.arm.row().tobytes())
    h.update(str(world.tick).encode())
    h.update((world.held or "-").encode())
    if world.held_offset is not None:
        h.update(np.asarray(world.held_offset, dtype=np.float64).tobytes())
    h.update(np.asarray(world.home, dtype=np.float64).tobytes())
    for obj in world.objects:
        h.update(obj.id.encode())
        h.update(obj.color.encode())
        h.update(obj.size.encode())
        h.update(obj.center.astype(np.float64).tobytes())
        h.update(obj.velocity.astype(np.float64).tobytes())
    return h.hexdigest()
