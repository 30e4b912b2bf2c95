"""Scripted basal-ganglia stand-in: situation predicate -> routine intention.

Table file format, one row per line: `when <predicate> -> <intention words>`.
First matching row wins; predicates evaluate decoded (symbolic) percepts.
"""
from __future__ import annotations

from pathlib import Path


class RoutineTable:
    def __init__(self, rows: list[tuple[str, tuple[str, ...]]]):
        self.rows = rows

    def lookup(self, percepts: dict[str, bool]) -> tuple[str, ...] | None:
        for predicate, intention in self.rows:
            if percepts.get(predicate, False):
                return intention
        return None

    @staticmethod
    def parse(text: str) -> "RoutineTable":
        rows = []
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if not line.startswith("when ") or "->" not in line:
                raise ValueError(f"line {lineno}: expected 'when <predicate> -> <words>'")
            head, _, tail = line.partition("->")
            predicate = head[len("when"):].strip()
            words = tuple(tail.split())
            if not predicate or not words:
                raise ValueError(f"line {lineno}: empty predicate or intention")
            rows.append((predicate, words))
        return RoutineTable(rows)

    @staticmethod
    def load(path: str | Path) -> "RoutineTable":
        return RoutineTable.parse(Path(path).read_text())


DEFAULT_TABLE = """\
when imagined_pain -> retract
when imagined_disgust -> retract
"""


def default_routine_table() -> RoutineTable:
    return RoutineTable.parse(DEFAULT_TABLE)
