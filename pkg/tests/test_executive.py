import numpy as np
import pytest

from lgma.executive.bg import RoutineTable, default_routine_table
from lgma.executive.rules import UnparsableStatement, WorkingMemory, parse_rule


def _lvs(n):
    return [np.full(4, i, dtype=np.float32) for i in range(n)]


def test_parse_pain_rule():
    tokens = ("if", "pain", ",", "then", "release", "pull")
    rule = parse_rule(tokens, _lvs(len(tokens)))
    assert rule.condition_tokens == ("pain",)
    assert rule.then_tokens == ("release", "pull")
    assert rule.else_tokens == ()
    # lvs are positional pass-through
    assert rule.then_lvs[0][0] == 4 and rule.then_lvs[1][0] == 5


def test_parse_full_rule():
    tokens = ("if", "bafo", "kemo", ",", "then", "cida", ",", "else", "dopa", "etun")
    rule = parse_rule(tokens, _lvs(len(tokens)))
    assert rule.condition_tokens == ("bafo", "kemo")
    assert rule.then_tokens == ("cida",)
    assert rule.else_tokens == ("dopa", "etun")
    assert rule.else_lvs[0][0] == 8


@pytest.mark.parametrize("tokens", [
    ("then", "a", "if"),
    ("if", ",", "then", "a"),
    ("if", "x", "then", "a"),
    ("if", "x", ",", "a"),
    ("if", "x", ",", "then"),
    ("if", "x", ",", "then", "a", "b", "c"),
    ("if", "x", ",", "then", "a", ",", "b"),
])
def test_parse_rejects_bad_grammar(tokens):
    with pytest.raises(UnparsableStatement):
        parse_rule(tuple(tokens), _lvs(len(tokens)))


def test_working_memory_fifo_eviction():
    wm = WorkingMemory(capacity=3)
    for i in range(5):
        wm.put(f"k{i}", i)
    assert len(wm) == 3
    assert wm.get("k0") is None and wm.get("k1") is None
    assert wm.get("k4") == 4
    # re-putting refreshes recency
    wm.put("k2", 22)
    wm.put("k5", 5)
    assert wm.get("k2") == 22


def test_routine_table_first_match_wins():
    table = RoutineTable.parse(
        "when imagined_pain -> retract\nwhen imagined_pain -> push\n")
    assert table.lookup({"imagined_pain": True}) == ("retract",)
    assert table.lookup({"imagined_pain": False}) is None
    assert table.lookup({}) is None


def test_default_routine_table():
    table = default_routine_table()
    assert table.lookup({"imagined_pain": True}) == ("retract",)
    assert table.lookup({"imagined_disgust": True}) == ("retract",)
    assert table.lookup({"imagined_pain": False, "imagined_disgust": False}) is None


def test_routine_table_parse_errors():
    with pytest.raises(ValueError):
        RoutineTable.parse("if pain retract")
    with pytest.raises(ValueError):
        RoutineTable.parse("when ->")


def test_routine_table_determinism():
    table = default_routine_table()
    percepts = {"imagined_pain": True, "imagined_disgust": True}
    assert table.lookup(percepts) == table.lookup(dict(percepts))
