"""World constants, the key=value config file, and seeded RNG derivation.

Physical constants are fixed here in one block; training hyperparameters and
paths live in the (versioned) config and can be overridden from a file of
`key = value` lines.
"""
from __future__ import annotations

import hashlib
from pathlib import Path

import numpy as np

# ---------------------------------------------------------------------------
# fixed world constants
# ---------------------------------------------------------------------------
LINK0 = 1.0
LINK1 = 1.0
DT = 1.0                      # one tick = one integrator step
ALPHA_MAX = 2.0               # actuator clamp, rad/step^2
GRASP_RADIUS = 0.1            # hand-to-square-region distance that allows grasping
CONTACT_RADIUS = 0.05         # hand-to-square-region distance that triggers pain
DISPLACE_DEADZONE = 0.05      # pull/push labelling dead-zone
BIG_SIDE = 0.30
SMALL_SIDE = 0.15
WORKSPACE_RADIUS = 2.2
IMAGE_SIZE = 64
VIEW_HALF = 2.2               # world [-VIEW_HALF, VIEW_HALF]^2 -> image
ARM_WIDTH_PX = 3.0
MODAL_DIM = 256               # lv / vv / sv width
FRAME_DIM = 64                # spectrum frame width
MAX_UTTERANCE = 16
BLOCK_T = 4                   # atomic action block length
PULL_HOME_RADIUS = 0.12       # pull drags the held object to this radius
PUSH_STEP = 0.5               # push drives the hand outward by this much
COLORS = ("red", "green", "yellow", "cyan", "blue")
SIZES = ("big", "small")

CONFIG_VERSION = 1

DEFAULTS: dict[str, object] = {
    "config_version": CONFIG_VERSION,
    "seed": 7,
    "checkpoint_dir": "checkpoints",
    "dataset_dir": "datasets",
    "report_dir": "reports",
    "run_dir": "runs",
    "lexicon_path": "",            # empty -> built-in lexicon
    "tick_budget_ms": 5000,
    # vision autoencoder
    "vision.samples": 7000,
    "vision.epochs": 20,
    "vision.batch": 64,
    "vision.lr": 1e-3,
    "vision.code_noise": 0.02,
    "vision.active_weight": 12.0,
    # language autoencoder
    "language.samples": 14000,
    "language.epochs": 40,
    "language.batch": 64,
    "language.lr": 2e-3,
    "language.code_noise": 0.02,
    "language.mask_max": 32,
    # somatosensorimotor autoencoder
    "soma.samples": 30000,
    "soma.epochs": 80,
    "soma.batch": 128,
    "soma.lr": 2e-3,
    # association modules
    "wernicke.samples": 7000,
    "wernicke.epochs": 16,
    "wernicke.batch": 64,
    "wernicke.lr": 2e-3,
    "broca.samples": 7000,
    "broca.epochs": 16,
    "broca.batch": 64,
    "broca.lr": 2e-3,
    "mt.samples": 4000,
    "mt.epochs": 14,
    "mt.batch": 64,
    "mt.lr": 2e-3,
    "spl.samples": 5000,
    "spl.epochs": 14,
    "spl.batch": 64,
    "spl.lr": 2e-3,
    "ba1440.samples": 9000,
    "ba1440.epochs": 22,
    "ba1440.batch": 64,
    "ba1440.lr": 2e-3,
    "presma.samples": 3000,
    "presma.epochs": 25,
    "presma.batch": 64,
    "presma.lr": 2e-3,
    "sma.samples": 8000,
    "sma.epochs": 20,
    "sma.batch": 64,
    "sma.lr": 2e-3,
}


class Config(dict):
    """Flat key -> value config; unknown keys are rejected at load time."""

    def require_int(self, key: str) -> int:
        return int(self[key])

    def require_float(self, key: str) -> float:
        return float(self[key])

    def path(self, key: str) -> Path:
        return Path(str(self[key]))


def default_config() -> Config:
    return Config(DEFAULTS)


def load_config(path: str | Path | None) -> Config:
    """Load defaults, then apply `key = value` overrides from the file."""
    cfg = default_config()
    if path is None:
        return cfg
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in DEFAULTS:
            raise ValueError(f"{path}:{lineno}: unknown config key {key!r}")
        default = DEFAULTS[key]
        if isinstance(default, bool):
            cfg[key] = value.lower() in ("1", "true", "yes", "on")
        elif isinstance(default, int):
            cfg[key] = int(value)
        elif isinstance(default, float):
            cfg[key] = float(value)
        else:
            cfg[key] = value
    if cfg["config_version"] != CONFIG_VERSION:
        raise ValueError(
            f"config_version {cfg['config_version']} != supported {CONFIG_VERSION}"
        )
    return cfg


def save_config(cfg: Config, path: str | Path) -> None:
    lines = [f"{key} = {cfg[key]}" for key in sorted(cfg)]
    Path(path).write_text("\n".join(lines) + "\n")


# ---------------------------------------------------------------------------
# seeded RNG derivation
# ---------------------------------------------------------------------------

def _stable_hash(name: str) -> int:
    return int.from_bytes(hashlib.sha256(name.encode()).digest()[:8], "little")


def named_rng(name: str, seed: int) -> np.random.Generator:
    """Deterministic generator for (purpose name, base seed)."""
    return np.random.Generator(
        np.random.PCG64(np.random.SeedSequence([seed, _stable_hash(name)]))
    )
