"""Mental simulation: run a candidate intention on a cloned world, never the live one."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from lgma import config
from lgma.codecs.soma import SomaCodec
from lgma.world import (
    forward_kinematics,
    render_scene,
    square_distance,
    step_world,
    world_hash,
)
from lgma.world.state import WorldState


@dataclass
class ImageryResult:
    images: list[np.ndarray] = field(default_factory=list)
    percepts: dict[str, bool] = field(default_factory=dict)
    pre_hash: str = ""
    post_hash: str = ""


def _disgust(world: WorldState) -> bool:
    hand = forward_kinematics(world.arm.theta0, world.arm.theta1)
    for obj in world.objects:
        if obj.color != "green":
            continue
        if square_distance(hand, obj.center, obj.half_side) <= config.CONTACT_RADIUS:
            return True
    return False


def imagery_rollout(res, live_world: WorldState, intention_tokens: tuple[str, ...],
                    attention_word: str | None, attended_id: str | None,
                    start_sv: np.ndarray, live_hash: str) -> ImageryResult:
    """Expand the intention, execute it block by block on a clone, and collect
    imagined images (decoded cognitive maps) and imagined pain/disgust."""
    from lgma.orchestrator.datasets import stationary_window

    result = ImageryResult(pre_hash=live_hash)
    clone = live_world.clone()
    intention_lv = res.broca.compose_tokens(list(intention_tokens))
    commands = res.presma.decompose(intention_lv)
    mt_sess = res.mt.session()
    attn_lv = (res.language.encode_word(attention_word) if attention_word
               else res.language.encode_word("none"))
    pain = False
    disgust = _disgust(clone)
    for command in commands:
        scene_vv = res.vision.encode(render_scene(clone, "all"))
        ovv, _ = mt_sess.step(scene_vv, attn_lv)
        cur_sv = res.soma.encode(stationary_window(clone.arm))
        map_vv = res.spl.fuse(ovv, cur_sv)
        result.images.append(res.vision.decode(map_vv))
        action_sv = res.sma.act(command.lv, map_vv, cur_sv, start_sv)
        triples = res.soma.decode(action_sv)
        for a0, a1, hold in triples[1:]:
            clone = step_world(clone, a0, a1, hold)
            pain = pain or clone.arm.pain > 0
            disgust = disgust or _disgust(clone)
    result.percepts = {"imagined_pain": pain, "imagined_disgust": disgust}
    result.post_hash = world_hash(live_world)
    return result
