"""Outcome judging: phrase and tool-call rules over a finished trajectory."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..agent.types import Trajectory
from .scenario import Outcome, Scenario, ToolCallRule


@dataclass(frozen=True)
class RuleResult:
    rule: str
    passed: bool
    detail: str


@dataclass
class Judgment:
    matched_outcome: str | None
    all_matched: list[str] = field(default_factory=list)
    details: dict[str, list[RuleResult]] = field(default_factory=dict)


def _call_count(trajectory: Trajectory, rule: ToolCallRule) -> int:
    needles = [n.lower() for n in (rule.table, rule.input_contains) if n]
    count = 0
    for step in trajectory.steps:
        if step.action != rule.tool:
            continue
        haystack = step.action_input.lower()
        if all(needle in haystack for needle in needles):
            count += 1
    return count


def _judge_one(outcome: Outcome, trajectory: Trajectory) -> list[RuleResult]:
    prediction = (
        trajectory.prediction.predicted_root_cause if trajectory.prediction else ""
    )
    lowered = prediction.lower()
    results: list[RuleResult] = []
    for phrase in outcome.rules.phrases:
        present = phrase.lower() in lowered
        results.append(
            RuleResult(
                rule=f"phrase:{phrase}",
                passed=present,
                detail="present in prediction" if present else "absent from prediction",
            )
        )
    for phrase in outcome.rules.forbidden_phrases:
        present = phrase.lower() in lowered
        results.append(
            RuleResult(
                rule=f"forbidden_phrase:{phrase}",
                passed=not present,
                detail="absent as required" if not present else "present but forbidden",
            )
        )
    for rule in outcome.rules.tool_calls:
        count = _call_count(trajectory, rule)
        label = rule.table or rule.input_contains or "(any input)"
        results.append(
            RuleResult(
                rule=f"tool_call:{rule.tool}:{label}",
                passed=count >= rule.min_count,
                detail=f"{count} matching call(s), need >= {rule.min_count}",
            )
        )
    return results


def judge_outcome(scenario: Scenario, trajectory: Trajectory) -> Judgment:
    """An outcome matches iff every one of its rules passes; first match wins."""
    details: dict[str, list[RuleResult]] = {}
    matched: list[str] = []
    for outcome in scenario.outcomes:
        results = _judge_one(outcome, trajectory)
        details[outcome.id] = results
        if results and all(r.passed for r in results):
            matched.append(outcome.id)
    return Judgment(
        matched_outcome=matched[0] if matched else None,
        all_matched=matched,
        details=details,
    )
