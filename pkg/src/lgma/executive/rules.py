"""if/then/else rules and the bounded working-memory store.

Rule slots hold the raw word lvs straight from Wernicke (vector pass-through),
which is what lets branch emission generalize to words the association
modules never trained on.
"""
from __future__ import annotations

from collections import OrderedDict
from dataclasses import dataclass

import numpy as np

WM_CAPACITY = 8


class UnparsableStatement(ValueError):
    """Decoded tokens violate the rule grammar."""


@dataclass
class Rule:
    condition_tokens: tuple[str, ...]
    then_tokens: tuple[str, ...]
    else_tokens: tuple[str, ...]
    condition_lvs: list[np.ndarray]
    then_lvs: list[np.ndarray]
    else_lvs: list[np.ndarray]
    fired: bool = False


def parse_rule(tokens: tuple[str, ...], word_lvs: list[np.ndarray]) -> Rule:
    """Grammar: if <w>+ , then <w>{1,2} [, else <w>{1,2}]."""
    toks = list(tokens)
    if len(word_lvs) != len(toks):
        raise UnparsableStatement("token/vector length mismatch")
    if not toks or toks[0] != "if":
        raise UnparsableStatement("statement must start with 'if'")
    try:
        comma1 = toks.index(",")
    except ValueError:
        raise UnparsableStatement("missing ',' after condition") from None
    cond = toks[1:comma1]
    if not cond or any(t in ("if", "then", "else", ",") for t in cond):
        raise UnparsableStatement("empty or malformed condition")
    rest = toks[comma1 + 1:]
    if not rest or rest[0] != "then":
        raise UnparsableStatement("expected 'then' after ','")
    rest = rest[1:]
    if "," in rest:
        comma2 = rest.index(",")
        then = rest[:comma2]
        tail = rest[comma2 + 1:]
        if not tail or tail[0] != "else":
            raise UnparsableStatement("expected 'else' after second ','")
        els = tail[1:]
    else:
        then, els = rest, []
    if not 1 <= len(then) <= 2 or len(els) > 2:
        raise UnparsableStatement("branches must carry 1-2 words")
    if any(t in ("if", "then", "else", ",") for t in then + els):
        raise UnparsableStatement("markers inside a branch")

    # positional slices (repeated words stay distinct)
    cond_lvs = word_lvs[1:comma1]
    then_start = comma1 + 2
    then_lvs = word_lvs[then_start:then_start + len(then)]
    if els:
        else_start = then_start + len(then) + 2
        else_lvs = word_lvs[else_start:else_start + len(els)]
    else:
        else_lvs = []
    return Rule(tuple(cond), tuple(then), tuple(els), cond_lvs, then_lvs, else_lvs)


class WorkingMemory:
    """Bounded store of tagged vectors; oldest entry evicted beyond capacity."""

    def __init__(self, capacity: int = WM_CAPACITY):
        self.capacity = capacity
        self._slots: OrderedDict[str, object] = OrderedDict()

    def put(self, tag: str, value) -> None:
        if tag in self._slots:
            del self._slots[tag]
        self._slots[tag] = value
        while len(self._slots) > self.capacity:
            self._slots.popitem(last=False)

    def get(self, tag: str, default=None):
        return self._slots.get(tag, default)

    def __len__(self) -> int:
        return len(self._slots)

    def tags(self) -> list[str]:
        return list(self._slots)
