"""Evaluation suites mirroring the acceptance criteria, plus the lesion harness."""
from __future__ import annotations

import csv
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from lgma import config
from lgma.codecs import grammar
from lgma.codecs.lexicon import Utterance
from lgma.config import Config, named_rng
from lgma.cortex.lesion import LesionMask
from lgma.cortex.presma import ATOMIC_COMMANDS, EXPANSIONS, expand_tokens
from lgma.engine import layers as L
from lgma.engine import tensor as T
from lgma.orchestrator import datasets
from lgma.orchestrator.resources import Resources
from lgma.orchestrator.session import Session
from lgma.orchestrator.tasks import make_task, run_task
from lgma.world import (
    ArmState,
    WorldState,
    forward_kinematics,
    inverse_kinematics,
    plan_block,
    plan_straight_reach,
    render_scene,
    rollout_plan,
    square_distance,
    step_world,
)
from lgma.world.scenario import parse_scenario
from lgma.world.state import Trajectory


@dataclass
class SuiteResult:
    name: str
    passed: bool
    rows: list[tuple[str, str, float, int]] = field(default_factory=list)
    elapsed: float = 0.0


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------

def edit_distance(a, b) -> int:
    m, n = len(a), len(b)
    dp = list(range(n + 1))
    for i in range(1, m + 1):
        prev = dp[0]
        dp[0] = i
        for j in range(1, n + 1):
            cur = dp[j]
            dp[j] = min(dp[j] + 1, dp[j - 1] + 1,
                        prev + (a[i - 1] != b[j - 1]))
            prev = cur
    return dp[n]


def word_error_rate(hyp, ref) -> float:
    return edit_distance(hyp, ref) / max(len(ref), 1)


def pixel_set(img: np.ndarray) -> np.ndarray:
    return img.max(axis=2) > 0.5


def pixel_f1(pred: np.ndarray, truth: np.ndarray) -> float:
    p, t = pixel_set(pred), pixel_set(truth)
    inter = float(np.logical_and(p, t).sum())
    total = float(p.sum() + t.sum())
    if total == 0:
        return 1.0
    return 2.0 * inter / total


def image_centroid(img: np.ndarray) -> np.ndarray | None:
    """Intensity-weighted centroid mapped back to world coordinates."""
    w = img.max(axis=2).astype(np.float64)
    total = w.sum()
    if total < 1e-6:
        return None
    rows = np.arange(config.IMAGE_SIZE) + 0.5
    cy = float((w.sum(axis=1) * rows).sum() / total)
    cx = float((w.sum(axis=0) * rows).sum() / total)
    scale = 2.0 * config.VIEW_HALF / config.IMAGE_SIZE
    return np.array([cx * scale - config.VIEW_HALF,
                     config.VIEW_HALF - cy * scale])


# ---------------------------------------------------------------------------
# kinematics suite
# ---------------------------------------------------------------------------

def suite_kinematics(cfg: Config, res: Resources | None = None) -> SuiteResult:
    t0 = time.monotonic()
    seed = int(cfg["seed"])
    rng = named_rng("eval/kinematics", seed)
    worst_rt = 0.0
    for _ in range(1000):
        r = rng.uniform(0.05, 2.0)
        a = rng.uniform(-np.pi, np.pi)
        p = np.array([r * np.cos(a), r * np.sin(a)])
        for sign in (1, -1):
            q = forward_kinematics(*inverse_kinematics(p, sign))
            worst_rt = max(worst_rt, float(np.linalg.norm(q - p)))
    worst_theta = 0.0
    worst_hand = 0.0
    endpoints_still = True
    count = 0
    while count < 200:
        r1, a1 = rng.uniform(0.3, 1.95), rng.uniform(-np.pi, np.pi)
        r2, a2 = rng.uniform(0.3, 1.95), rng.uniform(-np.pi, np.pi)
        p_start = np.array([r1 * np.cos(a1), r1 * np.sin(a1)])
        p_goal = np.array([r2 * np.cos(a2), r2 * np.sin(a2)])
        T_steps = int(rng.integers(4, 16))
        try:
            traj = plan_straight_reach(p_start, p_goal, T_steps)
        except Exception:
            continue
        if np.abs(traj.alphas()).max() > config.ALPHA_MAX:
            continue
        count += 1
        first, last = traj.steps[0], traj.steps[-1]
        endpoints_still &= (first.omega0 == 0 and first.omega1 == 0
                            and last.omega0 == 0 and last.omega1 == 0)
        world = WorldState(arm=first)
        w2, executed = rollout_plan(world, traj)
        diff = np.abs(traj.matrix()[:, [0, 3]] - executed.matrix()[:, [0, 3]])
        worst_theta = max(worst_theta, float(diff.max()))
        hand = forward_kinematics(w2.arm.theta0, w2.arm.theta1)
        worst_hand = max(worst_hand, float(np.linalg.norm(hand - p_goal)))
    elapsed = time.monotonic() - t0
    passed = (worst_rt <= 1e-9 and worst_theta <= 1e-6 and worst_hand <= 1e-6
              and endpoints_still and elapsed < 10.0)
    rows = [
        ("arm-world", "ikfk_roundtrip_max", worst_rt, seed),
        ("arm-world", "replay_theta_max", worst_theta, seed),
        ("arm-world", "replay_hand_max", worst_hand, seed),
        ("arm-world", "endpoints_still", float(endpoints_still), seed),
        ("arm-world", "runtime_s", elapsed, seed),
    ]
    return SuiteResult("kinematics", passed, rows, elapsed)


# ---------------------------------------------------------------------------
# gradient suite
# ---------------------------------------------------------------------------

def _fd_max_rel(params: dict[str, T.Tensor], forward, h: float = 1e-3) -> float:
    loss = forward()
    for p in params.values():
        p.grad = None
    T.backward(loss)
    worst = 0.0
    for p in params.values():
        analytic = p.grad.copy() if p.grad is not None else np.zeros_like(p.data)
        flat = p.data.ravel()
        aflat = analytic.ravel()
        for i in range(flat.size):
            orig = flat[i]
            flat[i] = orig + h
            lp = float(forward().data)
            flat[i] = orig - h
            lm = float(forward().data)
            flat[i] = orig
            fd = (lp - lm) / (2 * h)
            rel = abs(aflat[i] - fd) / max(abs(aflat[i]), abs(fd), 1e-6)
            worst = max(worst, rel)
    return worst


def suite_gradients(cfg: Config, res: Resources | None = None) -> SuiteResult:
    t0 = time.monotonic()
    seed = int(cfg["seed"])
    rows = []
    worst_overall = 0.0
    for s in range(5):
        rng = named_rng(f"eval/grad/{s}", seed)
        worst = 0.0
        # dense layers, every activation
        for act in ("tanh", "sigmoid", "relu", "identity"):
            layer = L.DenseLayer(4, 3, act, rng=rng, dtype=np.float64)
            x = T.Tensor(rng.normal(size=(2, 4)), dtype=np.float64)
            y = T.Tensor(rng.normal(size=(2, 3)), dtype=np.float64)
            worst = max(worst, _fd_max_rel(
                layer.params("d"), lambda l=layer: T.mse(l(x), y)))
        # lstm cell, three-step unroll (covers single-step + BPTT)
        cell = L.LstmCell(3, 4, rng=rng, dtype=np.float64)
        xs = [T.Tensor(rng.normal(size=(2, 3)), dtype=np.float64) for _ in range(3)]
        tgt = T.Tensor(rng.normal(size=(2, 4)), dtype=np.float64)

        def lstm_loss(cell=cell, xs=xs, tgt=tgt):
            h, c = cell.zero_state(2, np.float64)
            for x in xs:
                h, c = cell.step(x, h, c)
            return T.mse(h, tgt)

        worst = max(worst, _fd_max_rel(cell.params("l"), lstm_loss))
        # structural ops + softmax cross-entropy
        w = T.Tensor(rng.normal(size=(8, 6)), requires_grad=True, dtype=np.float64)
        xin = T.Tensor(rng.normal(size=(3, 8)), dtype=np.float64)
        labels = np.array([1, 4, 0])

        def mixed_loss(w=w, xin=xin):
            z = T.matmul(xin, w)
            a = T.avg_pool_groups(T.narrow(z, 0, 4), 2)
            b = T.repeat_groups(a, 2)
            z2 = T.concat([b, T.narrow(z, 4, 6)], axis=1)
            return T.softmax_cross_entropy(z2, labels)

        worst = max(worst, _fd_max_rel({"w": w}, mixed_loss))
        rows.append(("tensor-engine", f"fd_max_rel_seed{s}", worst, seed))
        worst_overall = max(worst_overall, worst)
    elapsed = time.monotonic() - t0
    passed = worst_overall < 1e-4 and elapsed < 30.0
    rows.append(("tensor-engine", "fd_max_rel", worst_overall, seed))
    rows.append(("tensor-engine", "runtime_s", elapsed, seed))
    return SuiteResult("gradients", passed, rows, elapsed)


# ---------------------------------------------------------------------------
# codec fidelity suite
# ---------------------------------------------------------------------------

def held_out_images(res: Resources, n: int, tag: str = "eval") -> np.ndarray:
    records = datasets.gen_vision(n, int(res.cfg["seed"]) + 7919, res)
    return np.stack([r["x"] for r in records])


def eval_vision_mse(res: Resources, n: int = 500) -> float:
    X = held_out_images(res, n)
    errs = []
    for i in range(0, len(X), 128):
        batch = X[i:i + 128]
        codes = res.vision.encode_batch(batch.reshape(-1, config.IMAGE_SIZE,
                                                      config.IMAGE_SIZE, 3))
        recon = res.vision.decode_batch(codes).reshape(len(batch), -1)
        errs.extend(((recon - batch) ** 2).mean(axis=1).tolist())
    return float(np.mean(errs))


def eval_language_roundtrip(res: Resources, n: int = 500) -> float:
    rng = named_rng("eval/language", int(res.cfg["seed"]))
    ok = 0
    for _ in range(n):
        tokens = tuple(grammar.sample_sentence(rng, fillers=grammar.FILLER_WORDS))
        lv = res.language.encode(Utterance(tokens))
        ok += res.language.decode(lv).tokens == tokens
    return ok / n


def eval_soma_replay(res: Resources, n: int = 200) -> tuple[float, float]:
    """(fraction within 0.05 hand error, mean error) on held-out reach blocks."""
    rng = named_rng("eval/soma", int(res.cfg["seed"]))
    hits, errs = 0, []
    count = 0
    while count < n:
        t0, t1 = datasets.sample_pose(rng)
        arm = ArmState(theta0=t0, theta1=t1)
        delta = rng.uniform(-2.0, 2.0, size=2)
        block = plan_block(arm, (t0 + delta[0], t1 + delta[1]))
        if np.abs(block.alphas()).max() > config.ALPHA_MAX:
            continue
        count += 1
        sv = res.soma.encode(block)
        triples = res.soma.decode(sv)
        world = WorldState(arm=arm)
        for a0, a1, hold in triples[1:]:
            world = step_world(world, a0, a1, hold)
        hand = forward_kinematics(world.arm.theta0, world.arm.theta1)
        target = forward_kinematics(block.steps[-1].theta0, block.steps[-1].theta1)
        err = float(np.linalg.norm(hand - target))
        errs.append(err)
        hits += err <= 0.05
    return hits / n, float(np.mean(errs))


def suite_codecs(cfg: Config, res: Resources) -> SuiteResult:
    t0 = time.monotonic()
    seed = int(cfg["seed"])
    mse = eval_vision_mse(res)
    rt = eval_language_roundtrip(res)
    frac, mean_err = eval_soma_replay(res)
    elapsed = time.monotonic() - t0
    passed = mse <= 0.01 and rt >= 0.99 and frac >= 0.95
    rows = [
        ("sensory-codecs", "vision_heldout_mse", mse, seed),
        ("sensory-codecs", "language_roundtrip", rt, seed),
        ("sensory-codecs", "soma_replay_hit", frac, seed),
        ("sensory-codecs", "soma_replay_mean_err", mean_err, seed),
    ]
    return SuiteResult("codecs", passed, rows, elapsed)


# ---------------------------------------------------------------------------
# lesion suite
# ---------------------------------------------------------------------------

def lesion_experiment(res: Resources, ns=(0, 25, 64, 128, 192, 256),
                      masks_per_n: int = 20, seed: int | None = None,
                      sentences: int = 120):
    """WER table over lesion sizes; returns (rows, constant_at_full, t2_at_full)."""
    seed = int(res.cfg["seed"]) if seed is None else seed
    rng = named_rng("eval/lesion", seed)
    sents = [tuple(grammar.sample_sentence(rng, fillers=grammar.FILLER_WORDS))
             for _ in range(sentences)]
    composed = [res.broca.compose([res.codebook.lv(t) for t in toks])
                for toks in sents]
    table = []
    constant_full = True
    t2_full = True
    for n in ns:
        wers = []
        n_masks = 1 if n == 0 else masks_per_n
        full_outputs = []
        for m in range(n_masks):
            mask = LesionMask.random(n, seed * 1000 + m) if n else LesionMask.none()
            for toks, lv in zip(sents, composed):
                out = mask.apply(lv)
                if n == 256:
                    full_outputs.append(out)
                decoded = res.language.decode(out).tokens
                wers.append(word_error_rate(decoded, toks))
        mean_wer = float(np.mean(wers))
        table.append((n, mean_wer))
        if n == 256 and full_outputs:
            ref = full_outputs[0]
            constant_full = all(np.array_equal(ref, o) for o in full_outputs)
            t2_full = res.language.decode(ref).tokens == ("t2",)
    return table, constant_full, t2_full


def suite_lesion(cfg: Config, res: Resources) -> SuiteResult:
    t0 = time.monotonic()
    seed = int(cfg["seed"])
    table, constant_full, t2_full = lesion_experiment(res)
    wer = dict(table)
    monotone = all(wer[a] <= wer[b] + 1e-9 for a, b in
                   zip([0, 25, 64, 128, 192], [25, 64, 128, 192, 256]))
    passed = (wer[0] <= 0.01 and monotone and wer[25] <= 0.20
              and wer[128] > wer[25] and constant_full and t2_full)
    rows = [("association-cortex", f"wer_n{n}", w, seed) for n, w in table]
    rows += [
        ("association-cortex", "wer_monotone", float(monotone), seed),
        ("association-cortex", "full_lesion_constant", float(constant_full), seed),
        ("association-cortex", "full_lesion_t2", float(t2_full), seed),
    ]
    return SuiteResult("lesion", passed, rows, time.monotonic() - t0)


# ---------------------------------------------------------------------------
# preSMA suite
# ---------------------------------------------------------------------------

PHRASE_CASES = [
    ("release", "pull"), ("release", "retract"), ("reach", "hold"),
    ("hold", "pull"), ("pull", "release"), ("release", "push"),
    ("reach", "push"), ("push", "release"), ("retract", "stop"),
    ("reach", "retract"), ("hold", "release"),
]


def suite_presma(cfg: Config, res: Resources) -> SuiteResult:
    t0 = time.monotonic()
    seed = int(cfg["seed"])
    cases = [(w,) for w in EXPANSIONS] + PHRASE_CASES
    assert len(cases) == 20
    exact = 0
    exact_broca = 0
    for words in cases:
        expected = list(expand_tokens(words))
        lv = res.language.encode(Utterance(words))
        got = [c.token for c in res.presma.decompose(lv)]
        exact += got == expected
        lv2 = res.broca.compose_tokens(list(words))
        got2 = [c.token for c in res.presma.decompose(lv2)]
        exact_broca += got2 == expected
    passed = exact == len(cases)
    rows = [
        ("association-cortex", "presma_exact", exact / len(cases), seed),
        ("association-cortex", "presma_exact_broca", exact_broca / len(cases), seed),
    ]
    return SuiteResult("presma", passed, rows, time.monotonic() - t0)


# ---------------------------------------------------------------------------
# cortex behavioural suite (MT / SPL / BA14/40 / SMA postconditions)
# ---------------------------------------------------------------------------

def eval_mt(res: Resources, n: int = 120):
    """F1 gate follows the spec's worked case (big attended square); small
    squares cover at most ~9 pixels at this resolution and are reported via
    exclusivity only."""
    rng = named_rng("eval/mt", int(res.cfg["seed"]))
    f1s, excl, pos_err = [], [], []
    count = 0
    while count < n:
        world = datasets.sample_scene(rng, n_objects=int(rng.integers(1, 4)))
        if not world.objects:
            continue
        word, target = datasets.unique_attention(rng, world.objects)
        if target is None or target.size != "big":
            continue
        count += 1
        vv = res.vision.encode(render_scene(world, "all"))
        attn = res.language.encode_word(word)
        ovv, olv = res.mt.attend([vv] * 3, attn)
        decoded = res.vision.decode(ovv)
        oracle = datasets.object_only_render(world.arm, target)
        f1s.append(pixel_f1(decoded, oracle))
        for other in world.objects:
            if other.id != target.id:
                excl.append(pixel_f1(decoded,
                                     datasets.object_only_render(world.arm, other)))
        # property words decode
        props = res.language.decode(olv).tokens
        pos_err.append(float(props == datasets.property_tokens(target)))
    # initial / predict position reports (big moving object)
    init_err, pred_err = [], []
    for _ in range(60):
        world = datasets.sample_scene(rng, n_objects=1, movers=1.0)
        obj = world.objects[0]
        obj.size = "big"
        first = obj.center.copy()
        vvs = []
        sim = world
        for _ in range(4):
            vvs.append(res.vision.encode(render_scene(sim, "all")))
            sim = step_world(sim, 0.0, 0.0, 0)
        cur = sim.object_by_id(obj.id)
        ovv_i, _ = res.mt.attend(vvs, res.language.encode_word("initial"))
        ovv_p, _ = res.mt.attend(vvs, res.language.encode_word("predict"))
        ci = image_centroid(res.vision.decode(ovv_i))
        cp = image_centroid(res.vision.decode(ovv_p))
        if ci is not None:
            init_err.append(float(np.linalg.norm(ci - first)))
        if cp is not None:
            pred_err.append(float(np.linalg.norm(cp - (cur.center + cur.velocity))))
    return (float(np.mean(f1s)), float(np.mean(excl)) if excl else 0.0,
            float(np.mean(pos_err)),
            float(np.mean(init_err)), float(np.mean(pred_err)))


def eval_spl(res: Resources, n: int = 200) -> float:
    rng = named_rng("eval/spl", int(res.cfg["seed"]))
    f1s = []
    for _ in range(n):
        t0, t1 = datasets.sample_pose(rng)
        arm = ArmState(theta0=t0, theta1=t1)
        objs = datasets.sample_objects(rng, 1)
        if not objs:
            continue
        obj = objs[0]
        ovv = res.vision.encode(datasets.object_only_render(arm, obj))
        sv = res.soma.encode(datasets.stationary_window(arm))
        fused = res.spl.fuse(ovv, sv)
        decoded = res.vision.decode(fused)
        oracle = datasets.arm_plus_render(arm, obj)
        f1s.append(pixel_f1(decoded, oracle))
    return float(np.mean(f1s))


def eval_ba(res: Resources, n: int = 120):
    recs = datasets.gen_ba1440(n, int(res.cfg["seed"]) + 4243, res)
    ok_by_kind: dict[str, list[bool]] = {"pain": [], "did": [], "seq": []}
    q_pain = res.language.encode(Utterance(("pain?",)))
    q_seq = res.language.encode(Utterance(("sequence?",)))
    for r in recs:
        answer = res.ba1440.report(list(r["svs"]), r["q"])
        got = res.language.decode(answer).tokens
        want = res.language.decode(r["a"]).tokens
        if np.allclose(r["q"], q_pain):
            kind = "pain"
        elif np.allclose(r["q"], q_seq):
            kind = "seq"
        else:
            kind = "did"
        ok_by_kind[kind].append(got == want)
    return {k: float(np.mean(v)) if v else 1.0 for k, v in ok_by_kind.items()}


def eval_sma(res: Resources, n: int = 150):
    """Replay-grounded postconditions for reach / pull / null."""
    rng = named_rng("eval/sma", int(res.cfg["seed"]))
    reach_hits, reach_err = 0, []
    count = 0
    while count < n:
        world = datasets.sample_scene(rng, n_objects=int(rng.integers(1, 3)))
        if not world.objects:
            continue
        target = world.objects[0]
        if np.linalg.norm(target.center) > 1.9 or np.linalg.norm(target.center) < 0.2:
            continue
        count += 1
        arm = world.arm
        cur_sv = res.soma.encode(datasets.stationary_window(arm))
        start_sv = cur_sv
        map_vv = datasets._pipeline_map(res, world, target, cur_sv)
        sv = res.sma.act(res.codebook.lv("reach").astype(np.float32),
                         map_vv, cur_sv, start_sv)
        sim = world
        for a0, a1, hold in res.soma.decode(sv)[1:]:
            sim = step_world(sim, a0, a1, hold)
        hand = forward_kinematics(sim.arm.theta0, sim.arm.theta1)
        obj = sim.object_by_id(target.id)
        err = square_distance(hand, obj.center, obj.half_side)
        reach_err.append(float(err))
        reach_hits += err <= 0.1
    # pull: object moves >= 0.3 closer to home
    pull_hits, pulls = 0, 0
    while pulls < 60:
        world = datasets._grasped_world(rng)
        if world is None:
            continue
        obj = world.objects[0]
        if np.linalg.norm(obj.center) < 0.7:
            continue
        pulls += 1
        arm = world.arm
        cur_sv = res.soma.encode(datasets.stationary_window(arm))
        map_vv = datasets._pipeline_map(res, world, obj, cur_sv)
        sv = res.sma.act(res.codebook.lv("pull").astype(np.float32), map_vv,
                         cur_sv, cur_sv)
        before = float(np.linalg.norm(obj.center))
        sim = world
        for a0, a1, hold in res.soma.decode(sv)[1:]:
            sim = step_world(sim, a0, a1, hold)
        after = float(np.linalg.norm(sim.object_by_id(obj.id).center))
        pull_hits += (before - after) >= 0.3
    # null command -> near-zero actuation
    null_max = 0.0
    for _ in range(40):
        world = datasets.sample_scene(rng, n_objects=1)
        arm = world.arm
        cur_sv = res.soma.encode(datasets.stationary_window(arm))
        map_vv = datasets._pipeline_map(res, world,
                                        world.objects[0] if world.objects else None,
                                        cur_sv)
        sv = res.sma.act(np.zeros(config.MODAL_DIM, dtype=np.float32), map_vv,
                         cur_sv, cur_sv)
        for a0, a1, hold in res.soma.decode(sv):
            null_max = max(null_max, abs(a0), abs(a1))
    return (reach_hits / count, float(np.mean(reach_err)),
            pull_hits / pulls, null_max)


def suite_cortex(cfg: Config, res: Resources) -> SuiteResult:
    t0 = time.monotonic()
    seed = int(cfg["seed"])
    mt_f1, mt_excl, mt_prop, init_err, pred_err = eval_mt(res)
    spl_f1 = eval_spl(res)
    ba = eval_ba(res)
    reach_frac, reach_err, pull_frac, null_max = eval_sma(res)
    elapsed = time.monotonic() - t0
    passed = (mt_f1 >= 0.8 and mt_excl < 0.05 and spl_f1 >= 0.8
              and init_err <= 0.1 and pred_err <= 0.1
              and ba["pain"] >= 0.95 and ba["did"] >= 0.85 and ba["seq"] >= 0.9
              and reach_frac >= 0.9 and pull_frac >= 0.9 and null_max <= 0.05)
    rows = [
        ("association-cortex", "mt_pixel_f1", mt_f1, seed),
        ("association-cortex", "mt_exclusivity", mt_excl, seed),
        ("association-cortex", "mt_property_acc", mt_prop, seed),
        ("association-cortex", "mt_initial_pos_err", init_err, seed),
        ("association-cortex", "mt_predict_pos_err", pred_err, seed),
        ("association-cortex", "spl_pixel_f1", spl_f1, seed),
        ("association-cortex", "ba_pain_acc", ba["pain"], seed),
        ("association-cortex", "ba_did_acc", ba["did"], seed),
        ("association-cortex", "ba_seq_acc", ba["seq"], seed),
        ("association-cortex", "sma_reach_hit", reach_frac, seed),
        ("association-cortex", "sma_reach_err", reach_err, seed),
        ("association-cortex", "sma_pull_hit", pull_frac, seed),
        ("association-cortex", "sma_null_alpha_max", null_max, seed),
    ]
    return SuiteResult("cortex", passed, rows, elapsed)


# ---------------------------------------------------------------------------
# dlPFC generalization suite
# ---------------------------------------------------------------------------

def eval_dlpfc(res: Resources, n_rules: int = 200):
    from lgma.executive.dlpfc import Dlpfc
    rng = named_rng("eval/dlpfc", int(res.cfg["seed"]))
    token_ok, token_total = 0, 0
    exact = 0
    for _ in range(n_rules):
        tokens, cond, then, els = grammar.sample_rule(rng, grammar.EVAL_FILLERS,
                                                      pain_bias=0.0)
        lv = res.language.encode(Utterance(tuple(tokens)))
        word_lvs, decoded = res.wernicke.decompose(lv)
        engine = Dlpfc(res.broca, res.codebook)
        try:
            engine.ingest(tuple(decoded), word_lvs)
        except Exception:
            token_total += len(then) or 1
            continue
        out = engine.step(None)
        answer = "T" if rng.random() < 0.5 else "F"
        expected = then if answer == "T" else els
        result = engine.step((answer,))
        if not expected:
            exact += result is None
            token_total += 1
            token_ok += result is None
            continue
        if result is None or result[0] != "intend":
            token_total += len(expected)
            continue
        got = list(res.language.decode(result[2]).tokens)
        token_total += len(expected)
        token_ok += sum(a == b for a, b in zip(got, expected))
        exact += got == list(expected)
    return token_ok / max(token_total, 1), exact / n_rules


def suite_dlpfc(cfg: Config, res: Resources) -> SuiteResult:
    t0 = time.monotonic()
    seed = int(cfg["seed"])
    token_acc, exact = eval_dlpfc(res)
    passed = token_acc >= 0.95
    rows = [
        ("executive", "dlpfc_branch_token_acc", token_acc, seed),
        ("executive", "dlpfc_branch_exact", exact, seed),
    ]
    return SuiteResult("dlpfc", passed, rows, time.monotonic() - t0)


# ---------------------------------------------------------------------------
# task suite
# ---------------------------------------------------------------------------

def run_episodes(res: Resources, task: str, n: int, seed0: int = 0):
    results = []
    for k in range(n):
        spec = make_task(task, seed0 + k)
        results.append(run_task(spec, res, save_log=False))
    return results


def suite_tasks(cfg: Config, res: Resources, fetch_n: int = 100,
                other_n: int = 50) -> SuiteResult:
    t0 = time.monotonic()
    seed = int(cfg["seed"])
    rates = {}
    for task, n in (("fetch_big", fetch_n), ("pain_reflex", other_n),
                    ("urgent_stop", other_n), ("imagery_reach", other_n)):
        results = run_episodes(res, task, n)
        rates[task] = float(np.mean([r["success"] for r in results]))
    describe = run_episodes(res, "describe_action", 10)
    rates["describe_action"] = float(np.mean([r["success"] for r in describe]))
    elapsed = time.monotonic() - t0
    passed = (rates["fetch_big"] >= 0.90 and rates["pain_reflex"] >= 0.95
              and rates["urgent_stop"] >= 1.0 and rates["imagery_reach"] >= 1.0)
    rows = [("orchestrator", f"{task}_success", rate, seed)
            for task, rate in rates.items()]
    return SuiteResult("tasks", passed, rows, elapsed)


# ---------------------------------------------------------------------------
# determinism suite
# ---------------------------------------------------------------------------

def suite_determinism(cfg: Config, res: Resources) -> SuiteResult:
    t0 = time.monotonic()
    seed = int(cfg["seed"])
    spec = make_task("fetch_big", 1)
    logs = []
    for _ in range(2):
        scenario = parse_scenario(spec.scenario_text)
        session = Session(res, scenario, spec.seed)
        for _ in range(spec.max_ticks):
            session.tick()
        logs.append(session.log.text())
    log_equal = logs[0] == logs[1]
    # tiny training run twice -> bitwise-identical checkpoints
    from lgma.orchestrator.training import TRAINERS
    from lgma.config import default_config
    small = default_config()
    small["soma.epochs"] = 2
    small["soma.samples"] = 200
    recs = datasets.gen_soma(200, seed, res)
    blobs = []
    for _ in range(2):
        codec, _ = TRAINERS["soma"](recs, small, res)
        blobs.append({k: v.data.tobytes() for k, v in codec.params().items()})
    train_equal = blobs[0] == blobs[1]
    elapsed = time.monotonic() - t0
    passed = log_equal and train_equal
    rows = [
        ("orchestrator", "event_log_identical", float(log_equal), seed),
        ("tensor-engine", "train_bitwise_identical", float(train_equal), seed),
    ]
    return SuiteResult("determinism", passed, rows, elapsed)


# ---------------------------------------------------------------------------
# driver
# ---------------------------------------------------------------------------

SUITES = {
    "kinematics": suite_kinematics,
    "gradients": suite_gradients,
    "codecs": suite_codecs,
    "lesion": suite_lesion,
    "presma": suite_presma,
    "cortex": suite_cortex,
    "dlpfc": suite_dlpfc,
    "tasks": suite_tasks,
    "determinism": suite_determinism,
}


def run_suites(names, cfg: Config, res: Resources | None = None):
    if res is None:
        res = Resources(cfg)
    results = []
    for name in names:
        if name not in SUITES:
            raise KeyError(f"unknown suite {name!r}")
        results.append(SUITES[name](cfg, res))
    return results


def write_report(results: list[SuiteResult], path: str | Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["module", "metric", "value", "seed"])
        for result in results:
            for module, metric, value, seed in result.rows:
                writer.writerow([module, metric, f"{value:.9g}", seed])
            writer.writerow(["suite", result.name,
                             "pass" if result.passed else "fail", ""])
