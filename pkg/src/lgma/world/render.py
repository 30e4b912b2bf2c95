"""Deterministic anti-aliased rasterizer for scenes.

Squares are drawn by exact box coverage, the arm by distance-based coverage of
two 3px-wide strokes; layers compose by per-channel max so the pixel set of a
composite render is exactly the union of its primitives' pixel sets.
"""
from __future__ import annotations

import numpy as np

from lgma import config
from lgma.world.kinematics import elbow_position, forward_kinematics
from lgma.world.state import COLOR_RGB, WorldObject, WorldState


class UnknownObject(KeyError):
    """Render request names an object id that is not in the world."""


_N = config.IMAGE_SIZE
_SCALE = _N / (2.0 * config.VIEW_HALF)  # pixels per world unit

# pixel-center coordinates, reused across renders
_cols = np.arange(_N) + 0.5
_rows = np.arange(_N) + 0.5
_PX, _PY = np.meshgrid(_cols, _rows)


def _to_px(p: np.ndarray) -> np.ndarray:
    """World (x, y) -> continuous pixel (col, row); +y is up."""
    return np.array([(p[0] + config.VIEW_HALF) * _SCALE,
                     (config.VIEW_HALF - p[1]) * _SCALE])


def square_layer(center: np.ndarray, half_side: float, rgb) -> np.ndarray:
    """Coverage-weighted color layer for one axis-aligned square."""
    c = _to_px(center)
    h = half_side * _SCALE
    x0, x1 = c[0] - h, c[0] + h
    y0, y1 = c[1] - h, c[1] + h
    cov_x = np.clip(np.minimum(x1, _cols + 0.5) - np.maximum(x0, _cols - 0.5), 0.0, 1.0)
    cov_y = np.clip(np.minimum(y1, _rows + 0.5) - np.maximum(y0, _rows - 0.5), 0.0, 1.0)
    coverage = np.outer(cov_y, cov_x)
    return coverage[:, :, None] * np.asarray(rgb, dtype=np.float64)


def _segment_distance(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Distance in pixels from every pixel center to segment a-b (pixel coords)."""
    ab = b - a
    denom = float(ab @ ab)
    if denom == 0.0:
        dx, dy = _PX - a[0], _PY - a[1]
        return np.hypot(dx, dy)
    t = ((_PX - a[0]) * ab[0] + (_PY - a[1]) * ab[1]) / denom
    t = np.clip(t, 0.0, 1.0)
    cx = a[0] + t * ab[0]
    cy = a[1] + t * ab[1]
    return np.hypot(_PX - cx, _PY - cy)


def arm_layer(theta0: float, theta1: float) -> np.ndarray:
    """White two-segment arm, 3px stroke width."""
    shoulder = _to_px(np.zeros(2))
    elbow = _to_px(elbow_position(theta0))
    hand = _to_px(forward_kinematics(theta0, theta1))
    half_w = config.ARM_WIDTH_PX / 2.0
    d = np.minimum(_segment_distance(shoulder, elbow), _segment_distance(elbow, hand))
    coverage = np.clip(half_w + 0.5 - d, 0.0, 1.0)
    return np.repeat(coverage[:, :, None], 3, axis=2)


def render_scene(world: WorldState, include: str = "all",
                 object_id: str | None = None) -> np.ndarray:
    """Rasterize to a 64x64x3 float image in [0,1].

    include: "all" (objects + arm), "objects_only", or "arm_plus" with
    object_id naming the single object to draw beside the arm.
    """
    if include not in ("all", "objects_only", "arm_plus"):
        raise ValueError(f"unknown include mode {include!r}")
    canvas = np.zeros((_N, _N, 3), dtype=np.float64)

    if include == "arm_plus":
        obj = world.object_by_id(object_id or "")
        if obj is None:
            raise UnknownObject(f"no object with id {object_id!r}")
        objects: list[WorldObject] = [obj]
    elif include in ("all", "objects_only"):
        objects = list(world.objects)

    for obj in objects:
        layer = square_layer(obj.center, obj.half_side, COLOR_RGB[obj.color])
        np.maximum(canvas, layer, out=canvas)
    if include in ("all", "arm_plus"):
        np.maximum(canvas, arm_layer(world.arm.theta0, world.arm.theta1), out=canvas)
    return np.clip(canvas, 0.0, 1.0).astype(np.float32)
