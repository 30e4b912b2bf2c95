"""Trained-codec behavior. Needs checkpoints (trains once if missing)."""
import numpy as np
import pytest

from lgma import config
from lgma.codecs.lexicon import Utterance
from lgma.codecs.vision import NotTrained, VisionCodec
from lgma.orchestrator import datasets
from lgma.orchestrator.evaluation import (
    eval_language_roundtrip,
    eval_soma_replay,
    eval_vision_mse,
)
from lgma.world import ArmState, WorldState, render_scene


def test_not_trained_raises():
    codec = VisionCodec()
    with pytest.raises(NotTrained):
        codec.encode(np.zeros((64, 64, 3), dtype=np.float32))


def test_vision_black_image(trained):
    img = np.zeros((config.IMAGE_SIZE, config.IMAGE_SIZE, 3), dtype=np.float32)
    recon = trained.vision.decode(trained.vision.encode(img))
    assert ((recon - img) ** 2).mean() <= 0.005


def test_vision_encode_deterministic(trained):
    world = WorldState(arm=ArmState(theta0=0.4, theta1=0.8))
    a = trained.vision.encode(render_scene(world, "all"))
    b = trained.vision.encode(render_scene(world, "all"))
    assert np.array_equal(a, b)
    assert a.shape == (config.MODAL_DIM,) and np.isfinite(a).all()


def test_vision_heldout_mse(trained):
    assert eval_vision_mse(trained, n=200) <= 0.01


def test_language_stop_roundtrip(trained):
    lv = trained.language.encode(Utterance(("stop",)))
    assert trained.language.decode(lv).tokens == ("stop",)


def test_language_fetch_big_roundtrip(trained):
    lv = trained.language.encode(Utterance(("fetch", "big")))
    assert trained.language.decode(lv).tokens == ("fetch", "big")


def test_language_zero_code_articulates_t2(trained):
    assert trained.language.decode(
        np.zeros(config.MODAL_DIM, dtype=np.float32)).tokens == ("t2",)


def test_language_roundtrip_rate(trained):
    assert eval_language_roundtrip(trained, n=200) >= 0.99


def test_word_code_separability(trained):
    cb = trained.codebook
    m = cb.matrix
    d2 = ((m[:, None, :] - m[None, :, :]) ** 2).sum(-1)
    np.fill_diagonal(d2, np.inf)
    assert np.sqrt(d2.min()) > 0.1


def test_soma_null_trajectory(trained):
    window = datasets.stationary_window(ArmState(theta0=0.5, theta1=-0.7))
    sv = trained.soma.encode(window)
    triples = trained.soma.decode(sv)
    assert len(triples) == config.BLOCK_T
    for a0, a1, hold in triples:
        assert abs(a0) <= 0.01 and abs(a1) <= 0.01


def test_soma_encode_deterministic(trained):
    window = datasets.stationary_window(ArmState(theta0=0.2, theta1=0.9))
    assert np.array_equal(trained.soma.encode(window), trained.soma.encode(window))


def test_soma_replay_fidelity(trained):
    frac, mean_err = eval_soma_replay(trained, n=100)
    assert frac >= 0.95


def test_modal_vector_shape_everywhere(trained):
    lv = trained.language.encode(Utterance(("reach", "red")))
    sv = trained.soma.encode(datasets.stationary_window(ArmState()))
    vv = trained.vision.encode(
        np.zeros((config.IMAGE_SIZE, config.IMAGE_SIZE, 3), dtype=np.float32))
    for v in (lv, sv, vv):
        assert v.shape == (config.MODAL_DIM,)
        assert np.isfinite(v).all()
