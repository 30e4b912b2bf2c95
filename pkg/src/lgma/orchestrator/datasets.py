"""Training-set generators, one per trainable module, all driven by world oracles."""
from __future__ import annotations

import numpy as np

from lgma import config
from lgma.codecs import grammar
from lgma.codecs.lexicon import END, Utterance, corrupt_utterance
from lgma.codecs.soma import SomaCodec
from lgma.config import named_rng
from lgma.cortex.presma import ATOMIC_COMMANDS, EXPANSIONS, expand_tokens
from lgma.orchestrator.resources import Resources
from lgma.world import (
    ArmState,
    WorldObject,
    WorldState,
    forward_kinematics,
    inverse_kinematics,
    label_displacement,
    plan_block,
    plan_straight_reach,
    render_scene,
    rollout_plan,
    sense_pain,
    square_distance,
    step_world,
)
from lgma.world.kinematics import elbow_branch
from lgma.world.planner import stop_block


class UnknownGenerator(KeyError):
    """No generator registered under that name."""


# ---------------------------------------------------------------------------
# scene sampling helpers (shared with the task runner)
# ---------------------------------------------------------------------------

def sample_pose(rng: np.random.Generator) -> tuple[float, float]:
    return float(rng.uniform(-np.pi, np.pi)), float(rng.uniform(-np.pi, np.pi))


def sample_objects(rng: np.random.Generator, n: int, min_sep: float = 0.5,
                   radius: tuple[float, float] = (0.4, 1.85),
                   movers: float = 0.0,
                   palette=None) -> list[WorldObject]:
    objs: list[WorldObject] = []
    tries = 0
    palette = palette or [(c, s) for c in config.COLORS for s in config.SIZES]
    while len(objs) < n and tries < 200:
        tries += 1
        r = rng.uniform(*radius)
        a = rng.uniform(-np.pi, np.pi)
        center = np.array([r * np.cos(a), r * np.sin(a)])
        if any(np.linalg.norm(center - o.center) < min_sep for o in objs):
            continue
        color, size = palette[int(rng.integers(len(palette)))]
        vel = np.zeros(2)
        if rng.random() < movers:
            vel = rng.uniform(-0.05, 0.05, size=2)
        objs.append(WorldObject(id=f"obj{len(objs)}", color=color, size=size,
                                center=center, velocity=vel))
    return objs


def sample_scene(rng: np.random.Generator, n_objects: int | None = None,
                 movers: float = 0.0) -> WorldState:
    t0, t1 = sample_pose(rng)
    n = int(rng.integers(0, 4)) if n_objects is None else n_objects
    return WorldState(arm=ArmState(theta0=t0, theta1=t1),
                      objects=sample_objects(rng, n, movers=movers))


def stationary_window(arm: ArmState, steps: int = config.BLOCK_T):
    """T identical rest rows at the given pose."""
    from lgma.world.state import Trajectory
    rest = ArmState(theta0=arm.theta0, theta1=arm.theta1,
                    hold=arm.hold, pain=arm.pain)
    return Trajectory(tuple([rest] * steps))


def object_only_render(arm: ArmState, obj: WorldObject) -> np.ndarray:
    return render_scene(WorldState(arm=arm, objects=[obj.clone()]), "objects_only")


def arm_plus_render(arm: ArmState, obj: WorldObject | None) -> np.ndarray:
    if obj is None:
        return render_scene(WorldState(arm=arm, objects=[]), "all")
    world = WorldState(arm=arm, objects=[obj.clone()])
    return render_scene(world, "arm_plus", obj.id)


def property_tokens(obj: WorldObject) -> tuple[str, ...]:
    return (obj.size, obj.color)


def unique_attention(rng: np.random.Generator, objs: list[WorldObject]):
    """(attention word, attended object) with a unique referent, or a 'none' word."""
    options = []
    for obj in objs:
        if sum(o.color == obj.color for o in objs) == 1:
            options.append((obj.color, obj))
        if sum(o.size == obj.size for o in objs) == 1:
            options.append((obj.size, obj))
    if options and rng.random() < 0.9:
        return options[int(rng.integers(len(options)))]
    absent = [c for c in config.COLORS if all(o.color != c for o in objs)]
    if absent:
        return str(rng.choice(absent)), None
    return "none", None


# ---------------------------------------------------------------------------
# generators
# ---------------------------------------------------------------------------

def gen_vision(count: int, seed: int, res: Resources) -> list[dict[str, np.ndarray]]:
    rng = named_rng("gen/vision", seed)
    records = []
    for i in range(count):
        roll = rng.random()
        if roll < 0.35:
            world = sample_scene(rng)
            img = render_scene(world, "all")
        elif roll < 0.60:
            world = sample_scene(rng, n_objects=1)
            img = object_only_render(world.arm, world.objects[0])
        elif roll < 0.85:
            world = sample_scene(rng, n_objects=1)
            img = arm_plus_render(world.arm, world.objects[0])
        elif roll < 0.95:
            world = sample_scene(rng, n_objects=0)
            img = render_scene(world, "all")
        else:
            img = np.zeros((config.IMAGE_SIZE, config.IMAGE_SIZE, 3), dtype=np.float32)
        records.append({"x": img.reshape(-1)})
    return records


def _token_indices(lexicon, tokens) -> np.ndarray:
    order = {w: i for i, w in enumerate(lexicon.words)}
    return np.array([order[t] for t in tokens], dtype=np.float32)


def gen_language(count: int, seed: int, res: Resources) -> list[dict[str, np.ndarray]]:
    rng = named_rng("gen/language", seed)
    lexicon = res.lexicon
    records = []
    # full coverage: every word (including confusion partners) as a 1-word sentence
    singles = [w for w in lexicon.words if w != END]
    for w in singles:
        records.append({"idx": _token_indices(lexicon, [w]),
                        "zero": np.zeros(1, dtype=np.float32)})
    while len(records) < count:
        roll = rng.random()
        if roll < 0.03:
            records.append({"idx": _token_indices(lexicon, ["t2"]),
                            "zero": np.ones(1, dtype=np.float32)})
            continue
        if rng.random() < 0.25:
            # rules are the hardest sentences; oversample them
            tokens = grammar.sample_rule(rng, grammar.FILLER_WORDS)[0]
        else:
            tokens = grammar.sample_sentence(rng, fillers=grammar.FILLER_WORDS)
        if roll < 0.20:
            tokens = list(corrupt_utterance(Utterance(tuple(tokens)), 0.5,
                                            int(rng.integers(1 << 30)), lexicon).tokens)
        records.append({"idx": _token_indices(lexicon, tokens),
                        "zero": np.zeros(1, dtype=np.float32)})
    return records[:count]


def _random_block(rng: np.random.Generator):
    """One 4-row oracle block of assorted kinds for the soma autoencoder."""
    t0, t1 = sample_pose(rng)
    roll = rng.random()
    moving = rng.random() < 0.3
    w = rng.uniform(-1.0, 1.0, size=2) if moving else np.zeros(2)
    hold0 = int(rng.random() < 0.3)
    arm = ArmState(theta0=t0, theta1=t1, omega0=w[0], omega1=w[1], hold=hold0)
    if roll < 0.40:  # reach-style motion block
        delta = rng.uniform(-2.2, 2.2, size=2)
        if np.max(np.abs(delta / 2.0 - w)) > config.ALPHA_MAX:
            delta = np.zeros(2)
        hold_seq = [hold0] * 4
        return plan_block(arm, (t0 + delta[0], t1 + delta[1]), hold_seq)
    if roll < 0.55:  # stop block
        return stop_block(arm)
    if roll < 0.75:  # hold / release transition at rest
        target_hold = int(rng.random() < 0.5)
        rest = ArmState(theta0=t0, theta1=t1, hold=hold0)
        return plan_block(rest, (t0, t1), [hold0] + [target_hold] * 3)
    rest = ArmState(theta0=t0, theta1=t1, hold=hold0)
    return plan_block(rest, (t0, t1), [hold0] * 4)  # null block


def _executed_window(rng: np.random.Generator):
    """Random 4-row slice of a reach executed against a (possibly hot) object."""
    for _ in range(20):
        t0, t1 = sample_pose(rng)
        arm = ArmState(theta0=t0, theta1=t1)
        start = forward_kinematics(t0, t1)
        color = "red" if rng.random() < 0.5 else str(rng.choice(config.COLORS))
        size = str(rng.choice(config.SIZES))
        r = rng.uniform(0.5, 1.8)
        a = rng.uniform(-np.pi, np.pi)
        goal = np.array([r * np.cos(a), r * np.sin(a)])
        T = int(rng.integers(6, 12))
        try:
            traj = plan_straight_reach(start, goal, T, theta_ref=(t0, t1))
        except Exception:
            continue
        if np.abs(traj.alphas()).max() > config.ALPHA_MAX:
            continue
        world = WorldState(arm=arm, objects=[WorldObject(
            id="obj0", color=color, size=size, center=goal)])
        _, executed = rollout_plan(world, traj)
        k = int(rng.integers(0, T - config.BLOCK_T + 1))
        rows = executed.matrix()[k:k + config.BLOCK_T]
        from lgma.world.state import Trajectory
        return Trajectory(tuple(ArmState.from_row(r) for r in rows))
    return stationary_window(ArmState())


def gen_soma(count: int, seed: int, res: Resources) -> list[dict[str, np.ndarray]]:
    rng = named_rng("gen/soma", seed)
    records = []
    for i in range(count):
        if rng.random() < 0.25:
            traj = _executed_window(rng)
        else:
            traj = _random_block(rng)
        records.append({"m": traj.matrix().astype(np.float32)})
    return records


def _mixed_sentences(rng: np.random.Generator, fillers):
    """Grammar sentences with extra weight on short phrases Broca must copy."""
    roll = rng.random()
    if roll < 0.55:
        return grammar.sample_sentence(rng, fillers=fillers)
    if roll < 0.80:
        pool = list(fillers) + grammar.ATTR_WORDS
        n = int(rng.integers(1, 3))
        return [str(w) for w in rng.choice(pool, size=n, replace=False)]
    n = int(rng.integers(1, 3))
    return [str(w) for w in rng.choice(grammar.ACTION_WORDS, size=n, replace=False)]


def gen_wernicke(count: int, seed: int, res: Resources) -> list[dict[str, np.ndarray]]:
    rng = named_rng("gen/wernicke", seed)
    language, codebook = res.language, res.codebook
    records = []
    for i in range(count):
        tokens = _mixed_sentences(rng, grammar.TRAIN_FILLERS)
        heard = tokens
        if rng.random() < 0.3:
            heard = list(corrupt_utterance(Utterance(tuple(tokens)), 0.6,
                                           int(rng.integers(1 << 30)), res.lexicon).tokens)
        slv = language.encode(Utterance(tuple(heard)))
        wlv = np.stack([codebook.lv(t) for t in [*tokens, END]])
        records.append({"slv": slv.astype(np.float32), "wlv": wlv.astype(np.float32)})
    return records


def gen_broca(count: int, seed: int, res: Resources) -> list[dict[str, np.ndarray]]:
    rng = named_rng("gen/broca", seed)
    language, codebook = res.language, res.codebook
    records = []
    for i in range(count):
        tokens = _mixed_sentences(rng, grammar.TRAIN_FILLERS)
        wlv = np.stack([codebook.lv(t) for t in [*tokens, END]])
        slv = language.encode(Utterance(tuple(tokens)))
        records.append({"wlv": wlv.astype(np.float32), "slv": slv.astype(np.float32)})
    return records


def _phrase_lv(res: Resources, tokens) -> np.ndarray:
    return res.language.encode(Utterance(tuple(tokens))).astype(np.float32)


def gen_mt(count: int, seed: int, res: Resources) -> list[dict[str, np.ndarray]]:
    """Compact scene-parameter records for the attention gate trainer."""
    rng = named_rng("gen/mt", seed)
    color_idx = {c: i for i, c in enumerate(config.COLORS)}
    size_idx = {s: i for i, s in enumerate(config.SIZES)}
    word_order = {w: i for i, w in enumerate(res.lexicon.words)}
    records = []
    while len(records) < count:
        roll = rng.random()
        if roll < 0.62:
            world = sample_scene(rng, n_objects=int(rng.integers(1, 4)))
            if not world.objects:
                continue
            word, target = unique_attention(rng, world.objects)
            tgt = -1 if target is None else world.objects.index(target)
        elif roll < 0.72:
            world = sample_scene(rng, n_objects=int(rng.integers(0, 3)))
            word, tgt = "arm", -2
        elif roll < 0.82:
            world = sample_scene(rng, n_objects=1)
            word, tgt = "square", 0
        else:
            world = sample_scene(rng, n_objects=1)
            word = "initial" if rng.random() < 0.5 else "predict"
            tgt = 0
        objs = np.array([
            [color_idx[o.color], size_idx[o.size], o.center[0], o.center[1],
             o.velocity[0], o.velocity[1]] for o in world.objects],
            dtype=np.float32).reshape(-1, 6)
        records.append({
            "arm": np.array([world.arm.theta0, world.arm.theta1], dtype=np.float32),
            "objs": objs,
            "attn_idx": np.array([word_order[word]], dtype=np.float32),
            "tgt": np.array([tgt], dtype=np.float32),
        })
    return records


def mt_record_world(record: dict[str, np.ndarray]) -> WorldState:
    arm = ArmState(theta0=float(record["arm"][0]), theta1=float(record["arm"][1]))
    objects = []
    for i, row in enumerate(record["objs"]):
        objects.append(WorldObject(
            id=f"obj{i}", color=config.COLORS[int(row[0])],
            size=config.SIZES[int(row[1])],
            center=np.array([row[2], row[3]], dtype=np.float64),
            velocity=np.array([row[4], row[5]], dtype=np.float64)))
    return WorldState(arm=arm, objects=objects)


def mt_record_mask(record: dict[str, np.ndarray], world: WorldState) -> np.ndarray:
    tgt = int(record["tgt"][0])
    if tgt == -1:
        img = np.zeros((config.IMAGE_SIZE, config.IMAGE_SIZE, 3), dtype=np.float32)
    elif tgt == -2:
        img = arm_plus_render(world.arm, None)
    else:
        img = object_only_render(world.arm, world.objects[tgt])
    return (img.max(axis=2) > 0.02).astype(np.float32).reshape(-1)


def gen_spl(count: int, seed: int, res: Resources) -> list[dict[str, np.ndarray]]:
    """(arm sv, visual code of the arm-only render at the window's final pose)."""
    rng = named_rng("gen/spl", seed)
    vision, soma = res.vision, res.soma
    records = []
    for i in range(count):
        t0, t1 = sample_pose(rng)
        arm = ArmState(theta0=t0, theta1=t1)
        if rng.random() < 0.5:
            window = stationary_window(arm)
            final_arm = arm
        else:
            delta = rng.uniform(-1.5, 1.5, size=2)
            block = plan_block(arm, (t0 + delta[0], t1 + delta[1]))
            window = block
            final_arm = block.steps[-1]
        sv = soma.encode(window)
        armcode = vision.encode(arm_plus_render(final_arm, None))
        records.append({"sv": sv.astype(np.float32),
                        "armcode": armcode.astype(np.float32)})
    return records


def _grasped_world(rng: np.random.Generator):
    """World where the hand already holds an object (post-reach situation)."""
    for _ in range(30):
        t0, t1 = sample_pose(rng)
        arm = ArmState(theta0=t0, theta1=t1, hold=0)
        hand = forward_kinematics(t0, t1)
        if np.linalg.norm(hand) < 0.5 or np.linalg.norm(hand) > 1.9:
            continue
        offset = rng.normal(0.0, 0.04, size=2)
        color = str(rng.choice([c for c in config.COLORS if c != "red"]))
        size = str(rng.choice(config.SIZES))
        obj = WorldObject(id="obj0", color=color, size=size, center=hand + offset)
        world = WorldState(arm=arm, objects=[obj])
        world = step_world(world, 0.0, 0.0, 1)  # grasp
        if world.held == "obj0":
            return world
    return None


def gen_ba1440(count: int, seed: int, res: Resources) -> list[dict[str, np.ndarray]]:
    rng = named_rng("gen/ba1440", seed)
    soma = res.soma
    q_pain = _phrase_lv(res, ["pain?"])
    q_did = [_phrase_lv(res, ["what", "you", "did?"]), _phrase_lv(res, ["you", "did?"])]
    q_seq = _phrase_lv(res, ["sequence?"])
    a_pain = _phrase_lv(res, ["very", "painful"])
    a_nopain = _phrase_lv(res, ["no", "pain"])
    records = []
    while len(records) < count:
        roll = rng.random()
        if roll < 0.30:
            # pain query over a window
            want_pain = rng.random() < 0.5
            traj = _executed_window(rng) if rng.random() < 0.6 else _random_block(rng)
            m = traj.matrix()
            has_pain = bool((m[:, 7] > 0).any())
            if has_pain != want_pain:
                if want_pain:
                    m = m.copy()
                    m[int(rng.integers(m.shape[0])):, 7] = 1.0
                    has_pain = True
                # plain windows already lack pain
            sv = soma.encode_matrix(m)
            records.append({"svs": sv[None].astype(np.float32), "q": q_pain,
                            "a": a_pain if has_pain else a_nopain})
        elif roll < 0.62:
            # what-you-did query over one executed block
            world = _grasped_world(rng)
            if world is None:
                continue
            action = str(rng.choice(["pull", "push", "touch"]))
            arm = world.arm
            hand = forward_kinematics(arm.theta0, arm.theta1)
            r = float(np.linalg.norm(hand))
            if action == "pull":
                target = hand * (max(r - rng.uniform(0.4, 0.9), 0.15) / r)
                hold_seq = [1, 1, 1, 1]
            elif action == "push":
                target = hand * (min(r + rng.uniform(0.4, 0.9), 1.9) / r)
                hold_seq = [1, 1, 1, 1]
            else:
                target = hand
                hold_seq = [1, 1, 1, 1] if rng.random() < 0.5 else [0, 0, 0, 0]
            try:
                tt = inverse_kinematics(target, elbow_branch(arm.theta1))
            except Exception:
                continue
            block = plan_block(arm, tt, hold_seq)
            if np.abs(block.alphas()).max() > config.ALPHA_MAX:
                continue
            before = world.objects[0].center.copy()
            w2, executed = rollout_plan(world, block)
            after = w2.objects[0].center.copy()
            label = label_displacement(executed, before, after, w2.home)
            sv = soma.encode(executed)
            records.append({"svs": sv[None].astype(np.float32),
                            "q": q_did[int(rng.integers(2))],
                            "a": _phrase_lv(res, [label])})
        else:
            # sequence query over a block sv stream
            if rng.random() < 0.5:
                names = ["reach", "hold", "pull", "release"]
                answer = "fetch"
            else:
                answer = str(rng.choice(ATOMIC_COMMANDS))
                names = [answer]
            svs = []
            for name in names:
                traj = _random_block(rng)
                svs.append(soma.encode(traj))
            records.append({"svs": np.stack(svs).astype(np.float32), "q": q_seq,
                            "a": _phrase_lv(res, [answer])})
    return records


def gen_presma(count: int, seed: int, res: Resources) -> list[dict[str, np.ndarray]]:
    rng = named_rng("gen/presma", seed)
    codebook = res.codebook
    intentions = list(EXPANSIONS)
    records = []
    for i in range(count):
        if rng.random() < 0.6:
            words = [str(rng.choice(intentions))]
        else:
            words = [str(w) for w in rng.choice(intentions, size=2, replace=False)]
        expansion = expand_tokens(tuple(words))
        ilv = _phrase_lv(res, words)
        cmdlv = np.stack([codebook.lv(t) for t in [*expansion, END]])
        records.append({"ilv": ilv, "cmdlv": cmdlv.astype(np.float32)})
    return records


def _pipeline_map(res: Resources, world: WorldState, attended: WorldObject | None,
                  cur_sv: np.ndarray) -> np.ndarray:
    """Cognitive map exactly as the live pipeline computes it."""
    vision, language = res.vision, res.language
    if attended is None:
        ovv = vision.encode(np.zeros((config.IMAGE_SIZE, config.IMAGE_SIZE, 3),
                                     dtype=np.float32))
    else:
        scene_vv = vision.encode(render_scene(world, "all"))
        word = attended.color
        same_color = sum(o.color == attended.color for o in world.objects)
        if same_color > 1:
            word = attended.size
        mt_sess = res.mt.session()
        for _ in range(3):
            ovv, _ = mt_sess.step(scene_vv, language.encode_word(word))
    return res.spl.fuse(ovv, cur_sv)


def gen_sma(count: int, seed: int, res: Resources) -> list[dict[str, np.ndarray]]:
    rng = named_rng("gen/sma", seed)
    soma, codebook = res.soma, res.codebook
    records = []
    commands = ["reach", "hold", "release", "pull", "push", "retract", "stop", "null"]
    weights = np.array([0.28, 0.10, 0.10, 0.16, 0.08, 0.12, 0.11, 0.05])
    while len(records) < count:
        cmd = str(rng.choice(commands, p=weights))
        if cmd in ("pull", "push") and rng.random() < 0.7:
            world = _grasped_world(rng)
            if world is None:
                continue
        else:
            world = sample_scene(rng, n_objects=int(rng.integers(1, 3)))
            if not world.objects:
                continue
        arm = world.arm
        moving = cmd == "stop" or (cmd in ("release", "pull", "retract") and rng.random() < 0.3)
        if moving:
            w = rng.uniform(-0.9, 0.9, size=2)
            arm = ArmState(theta0=arm.theta0, theta1=arm.theta1,
                           omega0=w[0], omega1=w[1], hold=arm.hold)
            world.arm = arm
        hand = forward_kinematics(arm.theta0, arm.theta1)
        attended = world.objects[0] if world.objects else None
        if world.held:
            attended = world.object_by_id(world.held)

        # episode-start pose: usually the current one, else a distinct rest pose
        if cmd == "retract" or rng.random() < 0.3:
            s0, s1 = sample_pose(rng)
            start_arm = ArmState(theta0=s0, theta1=s1)
        else:
            start_arm = ArmState(theta0=arm.theta0, theta1=arm.theta1)

        # oracle block
        try:
            if cmd == "reach":
                target = attended.center
                if np.linalg.norm(target) > 1.95 or np.linalg.norm(target) < 0.05:
                    continue
                tt = inverse_kinematics(target, elbow_branch(arm.theta1))
                block = plan_block(arm, tt, [arm.hold] * 4)
            elif cmd == "hold":
                block = plan_block(arm, (arm.theta0, arm.theta1), [arm.hold, 1, 1, 1])
            elif cmd == "release":
                block = plan_block(arm, (arm.theta0, arm.theta1), [arm.hold, 0, 0, 0])
            elif cmd == "pull":
                if world.held and world.held_offset is not None:
                    q = world.object_by_id(world.held).center
                    qstar = q * (config.PULL_HOME_RADIUS / max(np.linalg.norm(q), 1e-6))
                    target = qstar - world.held_offset
                else:
                    r = max(np.linalg.norm(hand), 1e-6)
                    target = hand * (0.25 / r)
                if np.linalg.norm(target) < 0.03:
                    continue
                tt = inverse_kinematics(target, elbow_branch(arm.theta1))
                block = plan_block(arm, tt, [arm.hold] * 4)
            elif cmd == "push":
                r = max(np.linalg.norm(hand), 1e-6)
                target = hand * (min(r + config.PUSH_STEP, 1.9) / r)
                tt = inverse_kinematics(target, elbow_branch(arm.theta1))
                block = plan_block(arm, tt, [arm.hold] * 4)
            elif cmd == "retract":
                block = plan_block(arm, (start_arm.theta0, start_arm.theta1),
                                   [arm.hold] * 4)
            elif cmd == "stop":
                block = stop_block(arm)
            else:  # null
                block = plan_block(arm, (arm.theta0, arm.theta1), [arm.hold] * 4)
        except Exception:
            continue
        if np.abs(block.alphas()).max() > config.ALPHA_MAX:
            continue

        cur_sv = soma.encode(stationary_window(arm) if not moving else
                             _moving_window(arm))
        start_sv = soma.encode(stationary_window(start_arm))
        map_vv = _pipeline_map(res, world, attended, cur_sv)
        cmd_lv = (np.zeros(config.MODAL_DIM, dtype=np.float32) if cmd == "null"
                  else codebook.lv(cmd).astype(np.float32))
        tsv = soma.encode(block)
        records.append({"cmd": cmd_lv, "map": map_vv.astype(np.float32),
                        "cur": cur_sv.astype(np.float32),
                        "start": start_sv.astype(np.float32),
                        "tsv": tsv.astype(np.float32)})
    return records


def _moving_window(arm: ArmState):
    """Constant-velocity window whose final row matches the moving arm state."""
    from lgma.world.state import Trajectory
    rows = []
    for k in range(config.BLOCK_T - 1, -1, -1):
        rows.append(ArmState(theta0=arm.theta0 - k * arm.omega0,
                             theta1=arm.theta1 - k * arm.omega1,
                             omega0=arm.omega0, omega1=arm.omega1,
                             hold=arm.hold))
    return Trajectory(tuple(rows))


GENERATORS = {
    "vision": gen_vision,
    "language": gen_language,
    "soma": gen_soma,
    "wernicke": gen_wernicke,
    "broca": gen_broca,
    "mt": gen_mt,
    "spl": gen_spl,
    "ba1440": gen_ba1440,
    "presma": gen_presma,
    "sma": gen_sma,
}


def gen_dataset(name: str, count: int, seed: int, res: Resources
                ) -> list[dict[str, np.ndarray]]:
    if name not in GENERATORS:
        raise UnknownGenerator(f"no generator named {name!r}")
    return GENERATORS[name](count, seed, res)
