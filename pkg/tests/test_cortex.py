"""Trained association-module behavior."""
import numpy as np
import pytest

from lgma import config
from lgma.codecs.lexicon import Utterance
from lgma.cortex.ba1440 import UnknownQuery, validate_query
from lgma.cortex.broca import EmptyInput
from lgma.cortex.lesion import LesionMask
from lgma.cortex.presma import EXPANSIONS, UnknownIntention, expand_tokens
from lgma.orchestrator import datasets
from lgma.orchestrator.evaluation import lesion_experiment, pixel_f1
from lgma.world import ArmState, render_scene


def test_wernicke_decomposes_fetch_big(trained):
    lv = trained.language.encode(Utterance(("fetch", "big")))
    _, tokens = trained.wernicke.decompose(lv)
    assert tokens == ["fetch", "big"]


def test_wernicke_corrects_confusion(trained):
    lv = trained.language.encode(Utterance(("kou", "reach", "big")))
    _, tokens = trained.wernicke.decompose(lv)
    assert tokens[0] == "you"


def test_wernicke_single_word(trained):
    lv = trained.language.encode(Utterance(("stop",)))
    lvs, tokens = trained.wernicke.decompose(lv)
    assert tokens == ["stop"] and len(lvs) == 1


def test_broca_empty_input(trained):
    with pytest.raises(EmptyInput):
        trained.broca.compose([])


def test_broca_unlesioned_roundtrip(trained):
    lv = trained.broca.compose_tokens(["fetch", "big"])
    assert trained.language.decode(lv).tokens == ("fetch", "big")


def test_wernicke_broca_roundtrip_rate(trained):
    from lgma.codecs import grammar

    rng = np.random.default_rng(23)
    ok = total = 0
    for _ in range(120):
        tokens = tuple(grammar.sample_sentence(rng))
        s_lv = trained.language.encode(Utterance(tokens))
        word_lvs, _ = trained.wernicke.decompose(s_lv)
        if not word_lvs:
            total += 1
            continue
        out = trained.broca.compose(word_lvs)
        ok += trained.language.decode(out).tokens == tokens
        total += 1
    assert ok / total >= 0.99


def test_full_lesion_constant_t2(trained):
    mask = LesionMask.random(config.MODAL_DIM, 3)
    outs = [trained.broca.compose_tokens(list(toks), mask)
            for toks in (("fetch", "big"), ("no", "pain"), ("stop",))]
    assert all(np.array_equal(outs[0], o) for o in outs)
    assert trained.language.decode(outs[0]).tokens == ("t2",)


def test_lesion_monotonicity(trained):
    table, constant_full, t2_full = lesion_experiment(
        trained, ns=(0, 25, 64, 128, 192, 256), masks_per_n=5, sentences=40)
    wer = dict(table)
    assert wer[0] <= 0.01
    assert wer[25] <= 0.20
    assert wer[128] > wer[25]
    order = [0, 25, 64, 128, 192, 256]
    assert all(wer[a] <= wer[b] + 1e-9 for a, b in zip(order, order[1:]))
    assert constant_full and t2_full


def test_mt_attends_big(trained):
    rng = np.random.default_rng(5)
    world = datasets.sample_scene(rng, n_objects=2)
    world.objects[0].size = "big"
    world.objects[1].size = "small"
    vv = trained.vision.encode(render_scene(world, "all"))
    ovv, olv = trained.mt.attend([vv] * 3, trained.language.encode_word("big"))
    decoded = trained.vision.decode(ovv)
    oracle = datasets.object_only_render(world.arm, world.objects[0])
    other = datasets.object_only_render(world.arm, world.objects[1])
    assert pixel_f1(decoded, oracle) >= 0.8
    assert pixel_f1(decoded, other) < 0.05


def test_mt_none_attention_decodable(trained):
    rng = np.random.default_rng(6)
    world = datasets.sample_scene(rng, n_objects=1)
    world.objects[0].color = "blue"
    vv = trained.vision.encode(render_scene(world, "all"))
    # attend a color absent from the scene
    ovv, olv = trained.mt.attend([vv] * 3, trained.language.encode_word("yellow"))
    decoded = trained.vision.decode(ovv)
    assert decoded.shape == (64, 64, 3)
    assert pixel_set_count(decoded) <= 8
    assert trained.language.decode(olv).tokens == ("none",)


def pixel_set_count(img):
    return int((img.max(axis=2) > 0.5).sum())


def test_spl_fuse_shows_arm_and_object(trained):
    rng = np.random.default_rng(7)
    arm = ArmState(theta0=0.5, theta1=0.9)
    obj = datasets.sample_objects(rng, 1)[0]
    ovv = trained.vision.encode(datasets.object_only_render(arm, obj))
    sv = trained.soma.encode(datasets.stationary_window(arm))
    fused = trained.spl.fuse(ovv, sv)
    decoded = trained.vision.decode(fused)
    oracle = datasets.arm_plus_render(arm, obj)
    assert pixel_f1(decoded, oracle) >= 0.8


def test_spl_none_object_shows_arm_only(trained):
    arm = ArmState(theta0=-0.8, theta1=0.6)
    empty = np.zeros((config.IMAGE_SIZE, config.IMAGE_SIZE, 3), dtype=np.float32)
    ovv = trained.vision.encode(empty)
    sv = trained.soma.encode(datasets.stationary_window(arm))
    decoded = trained.vision.decode(trained.spl.fuse(ovv, sv))
    oracle = datasets.arm_plus_render(arm, None)
    assert pixel_f1(decoded, oracle) >= 0.8


def test_ba_pain_answers(trained):
    rng = np.random.default_rng(8)
    q = trained.language.encode(Utterance(("pain?",)))
    window = datasets.stationary_window(ArmState(theta0=0.3, theta1=0.5))
    sv = trained.soma.encode(window)
    assert trained.language.decode(
        trained.ba1440.report([sv], q)).tokens == ("no", "pain")
    m = window.matrix().copy()
    m[2:, 7] = 1.0
    sv_pain = trained.soma.encode_matrix(m)
    assert trained.language.decode(
        trained.ba1440.report([sv_pain], q)).tokens == ("very", "painful")


def test_ba_validate_query():
    assert validate_query(("pain?",)) == "pain?"
    assert validate_query(("what", "you", "did?")) == "what you did?"
    with pytest.raises(UnknownQuery):
        validate_query(("why?",))


def test_presma_fetch_expansion(trained):
    lv = trained.language.encode(Utterance(("fetch",)))
    assert [c.token for c in trained.presma.decompose(lv)] == [
        "reach", "hold", "pull", "release"]


def test_presma_atomic_passthrough(trained):
    for word in ("reach", "stop", "retract"):
        lv = trained.language.encode(Utterance((word,)))
        cmds = trained.presma.decompose(lv)
        assert [c.token for c in cmds] == list(EXPANSIONS[word])
        assert cmds[0].slot == 0


def test_expand_tokens_table():
    assert expand_tokens(("fetch",)) == ("reach", "hold", "pull", "release")
    assert expand_tokens(("touch",)) == ("reach",)
    assert expand_tokens(("release", "pull")) == ("release", "pull")
    with pytest.raises(UnknownIntention):
        expand_tokens(("banana",))


def test_sma_null_command_near_zero(trained):
    rng = np.random.default_rng(9)
    world = datasets.sample_scene(rng, n_objects=1)
    arm = world.arm
    cur = trained.soma.encode(datasets.stationary_window(arm))
    map_vv = datasets._pipeline_map(trained, world, world.objects[0], cur)
    sv = trained.sma.act(np.zeros(config.MODAL_DIM, dtype=np.float32),
                         map_vv, cur, cur)
    for a0, a1, _ in trained.soma.decode(sv):
        assert abs(a0) <= 0.05 and abs(a1) <= 0.05
