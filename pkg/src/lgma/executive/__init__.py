"""Rule engine, working memory, routine-intention table, imagery rollouts."""

from lgma.executive.rules import Rule, UnparsableStatement, WorkingMemory, parse_rule
from lgma.executive.dlpfc import Dlpfc
from lgma.executive.bg import RoutineTable, default_routine_table
from lgma.executive.imagery import imagery_rollout

__all__ = [
    "Dlpfc",
    "RoutineTable",
    "Rule",
    "UnparsableStatement",
    "WorkingMemory",
    "default_routine_table",
    "imagery_rollout",
    "parse_rule",
]
