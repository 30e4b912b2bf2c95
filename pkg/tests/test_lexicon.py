import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lgma import config
from lgma.codecs.grammar import EVAL_FILLERS, TRAIN_FILLERS, sample_rule, sample_sentence
from lgma.codecs.lexicon import (
    CONFUSION_PAIRS,
    END,
    Utterance,
    UtteranceTooLong,
    corrupt_utterance,
    default_lexicon,
    load_lexicon,
    save_lexicon,
)


@pytest.fixture(scope="module")
def lexicon():
    return default_lexicon()


def test_frames_distinct(lexicon):
    assert lexicon.min_pairwise_distance() > 0.5


def test_frame_snap_identity(lexicon):
    for word in ("fetch", "big", "t2", END, "kou"):
        assert lexicon.snap(lexicon.frame(word)) == word


def test_frame_determinism():
    a = default_lexicon()
    b = default_lexicon()
    for word in a.words:
        assert np.array_equal(a.frame(word), b.frame(word))


def test_utterance_too_long():
    with pytest.raises(UtteranceTooLong):
        Utterance(tuple(["red"] * (config.MAX_UTTERANCE + 1)))


def test_corrupt_rate_zero(lexicon):
    u = Utterance(("you", "reach", "big"))
    assert corrupt_utterance(u, 0.0, 3, lexicon).tokens == u.tokens


def test_corrupt_rate_one(lexicon):
    u = Utterance(("you",))
    assert corrupt_utterance(u, 1.0, 3, lexicon).tokens == ("kou",)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 10_000), rate=st.floats(0.0, 1.0))
def test_corrupt_deterministic(seed, rate):
    lexicon = default_lexicon()
    u = Utterance(("you", "pain", "big", "small", "reach", "stop"))
    a = corrupt_utterance(u, rate, seed, lexicon)
    b = corrupt_utterance(u, rate, seed, lexicon)
    assert a.tokens == b.tokens
    for got, orig in zip(a.tokens, u.tokens):
        assert got == orig or CONFUSION_PAIRS.get(got) == orig


def test_lexicon_file_round_trip(tmp_path, lexicon):
    path = tmp_path / "lexicon.txt"
    save_lexicon(lexicon, path)
    loaded = load_lexicon(path)
    assert loaded.words == lexicon.words
    assert loaded.confusion == lexicon.confusion
    for word in lexicon.words:
        assert np.array_equal(loaded.frame(word), lexicon.frame(word))


def test_filler_split_disjoint():
    assert not (set(TRAIN_FILLERS) & set(EVAL_FILLERS))
    assert len(TRAIN_FILLERS) == len(EVAL_FILLERS) == 24


def test_grammar_sentences_valid(lexicon):
    rng = np.random.default_rng(0)
    for _ in range(300):
        tokens = sample_sentence(rng)
        assert 1 <= len(tokens) <= config.MAX_UTTERANCE
        assert lexicon.vocabulary_ok(tokens)


def test_rule_sampler_structure():
    rng = np.random.default_rng(1)
    for _ in range(100):
        tokens, cond, then, els = sample_rule(rng, EVAL_FILLERS)
        assert tokens[0] == "if"
        assert 1 <= len(then) <= 2 and len(els) <= 2
        assert "," in tokens and "then" in tokens
