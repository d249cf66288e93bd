"""Deterministic simulated diagnostic environment.

Scenario files bundle an incident, knowledge base articles, toy databases
with named row fixtures, scripted model/human lines, and outcome match rules,
so a whole episode is reviewable — and judgeable — as data.
"""

from .judge import Judgment, RuleResult, judge_outcome
from .query import SimQueryError, execute_query, parse_query
from .runner import ScenarioRun, SimDatabaseAdapter, run_scenario, shipped_scenario_path
from .scenario import (
    MatchRules,
    Outcome,
    Scenario,
    ScenarioError,
    ScenarioScript,
    SimTableSpec,
    ToolCallRule,
    build_database,
    load_scenario,
    load_scenario_text,
)
from .tables import COLUMN_TYPES, SimColumn, SimTable

__all__ = [
    "COLUMN_TYPES",
    "Judgment",
    "MatchRules",
    "Outcome",
    "RuleResult",
    "Scenario",
    "ScenarioError",
    "ScenarioRun",
    "ScenarioScript",
    "SimColumn",
    "SimDatabaseAdapter",
    "SimQueryError",
    "SimTable",
    "SimTableSpec",
    "ToolCallRule",
    "build_database",
    "execute_query",
    "judge_outcome",
    "load_scenario",
    "load_scenario_text",
    "parse_query",
    "run_scenario",
    "shipped_scenario_path",
]
