"""The rule engine: statement ingestion, query loop, intention emission.

The control skeleton is explicit (parse, working memory, answer decode); the
branch-emission pathway runs through trained Broca composition so copying
novel words is a learned vector pass-through.
"""
from __future__ import annotations

import numpy as np

from lgma.codecs.lexicon import ACTION_WORDS
from lgma.executive.rules import Rule, UnparsableStatement, WorkingMemory, parse_rule

TRUE_ANSWERS = {("T",), ("very", "painful")}
FALSE_ANSWERS = {("F",), ("no", "pain")}


class Dlpfc:
    """Per-session rule engine over the shared language pathways."""

    def __init__(self, broca, codebook):
        self.broca = broca
        self.codebook = codebook
        self.memory = WorkingMemory()
        self.rules: list[Rule] = []
        self.pending_query: tuple[str, ...] | None = None

    # ------------------------------------------------------------------
    def ingest(self, tokens: tuple[str, ...], word_lvs: list[np.ndarray]) -> Rule:
        """Store an if/then[/else] statement; begins querying next step."""
        rule = parse_rule(tokens, word_lvs)
        self.rules.append(rule)
        self.memory.put(f"rule{len(self.rules)}", rule)
        return rule

    def active_rule(self) -> Rule | None:
        for rule in reversed(self.rules):
            if not rule.fired:
                return rule
        return None

    # ------------------------------------------------------------------
    def step(self, answer_tokens: tuple[str, ...] | None):
        """One reasoning step.

        Returns ('query', tokens) to route to BA14/40 or the environment, or
        ('intend', tokens, lv) when a branch fires. While a rule is active the
        same condition query is re-emitted every cycle; a rule fires once.
        """
        rule = self.active_rule()
        if rule is None:
            self.pending_query = None
            return None
        if answer_tokens is not None:
            self.memory.put("last_answer", answer_tokens)
            if tuple(answer_tokens) in TRUE_ANSWERS:
                rule.fired = True
                self.pending_query = None
                return self._emit_branch(rule.then_tokens, rule.then_lvs)
            if tuple(answer_tokens) in FALSE_ANSWERS and rule.else_tokens:
                rule.fired = True
                self.pending_query = None
                return self._emit_branch(rule.else_tokens, rule.else_lvs)
            # F with empty else: keep monitoring
        query = ("pain?",) if rule.condition_tokens == ("pain",) else ("condition?",)
        self.pending_query = query
        self.memory.put("last_query", query)
        return ("query", query)

    def _emit_branch(self, tokens: tuple[str, ...], lvs: list[np.ndarray]):
        if not tokens:
            return None
        intention_lv = self.broca.compose(list(lvs))
        self.memory.put("last_intention", intention_lv)
        return ("intend", tokens, intention_lv)

    # ------------------------------------------------------------------
    def intend(self, tokens: tuple[str, ...], word_lvs: list[np.ndarray],
               imagery_armed: bool):
        """Direct command -> (intention tokens, intention lv, attention word)."""
        if not tokens or tokens[0] not in ACTION_WORDS:
            return None
        action = tokens[0]
        attention = None
        if len(tokens) > 1:
            attention = tokens[1]
        intent_tokens: tuple[str, ...] = (action,)
        lvs = [word_lvs[0]]
        if imagery_armed:
            intent_tokens = ("IMAGINE", action)
            lvs = [self.codebook.lv("IMAGINE"), word_lvs[0]]
        intention_lv = self.broca.compose(lvs)
        self.memory.put("last_intention", intention_lv)
        return intent_tokens, intention_lv, attention
