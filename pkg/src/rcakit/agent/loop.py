"""The planner loop: complete → parse → gate → dispatch → observe.

Crash-freedom is the central contract: tool exceptions, unknown tool names,
and unparseable completions all become observations and the loop continues.
The only aborts are planner-backend hard failures and context overflow.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Any, Callable, Iterable, Protocol

from ..corpus.records import SummarizedIncident
from ..gateway.core import ContextOverflowError, GatewayError, LlmSession
from .parser import ParseFailure, ParsedFinal, parse_step
from .prompts import render_prompt
from .types import (
    AgentConfig,
    AgentStep,
    FINAL_ACTION,
    INVALID_ACTION,
    RootCausePrediction,
    Trajectory,
)

FORMAT_REMINDER = (
    "Your last reply could not be parsed. Reply with exactly one step in this "
    "format:\n"
    "Thought: your reasoning\n"
    "Action: one tool name from the catalog\n"
    "Action Input: the input for that tool\n"
    "or finish with:\n"
    "Thought: your reasoning\n"
    "Final Answer: your conclusion"
)

INSUFFICIENT_EVIDENCE_PHRASES = (
    "insufficient evidence",
    "not enough evidence",
    "cannot determine",
    "cannot be determined",
    "unable to determine",
    "no conclusive",
)

_VERDICT_RE = re.compile(r"verdict:\s*(specific|insufficient_evidence)", re.IGNORECASE)


class ToolLike(Protocol):
    def __call__(self, action_input: str, context: Any) -> str: ...


class ToolsetLike(Protocol):
    def names(self) -> list[str]: ...

    def get(self, name: str) -> ToolLike | None: ...

    def descriptors(self) -> Iterable[Any]: ...


@dataclass(frozen=True)
class ApprovalDecision:
    approved: bool
    reason: str = ""
    abort: bool = False


@dataclass
class EpisodeHooks:
    """Optional callbacks used by the session service to stream events."""

    on_thought: Callable[[int, str, str, str], None] | None = None
    gate: Callable[[int, str, str], ApprovalDecision] | None = None
    on_observation: Callable[[int, str], None] | None = None
    should_abort: Callable[[], bool] | None = None


def classify_verdict(
    answer: str, phrases: tuple[str, ...] = INSUFFICIENT_EVIDENCE_PHRASES
) -> str:
    """Classify a final answer as specific or insufficient_evidence.

    An explicit "Verdict: <v>" marker in the answer wins; otherwise a
    configurable phrase set decides.
    """
    marker = _VERDICT_RE.search(answer)
    if marker:
        return marker.group(1).lower()
    lowered = answer.lower()
    if any(phrase in lowered for phrase in phrases):
        return "insufficient_evidence"
    return "specific"


def dispatch(
    action: str, action_input: str, toolset: ToolsetLike, context: Any
) -> str:
    """Execute one tool call, turning every failure into an observation."""
    tool = toolset.get(action)
    if tool is None:
        available = ", ".join(toolset.names())
        return f"unknown tool {action}; available: {available}"
    try:
        return tool(action_input, context)
    except Exception as exc:  # noqa: BLE001 - surfaced, never fatal
        message = str(exc) or type(exc).__name__
        return f"error: {message}"


def run_episode(
    incident: SummarizedIncident,
    toolset: ToolsetLike,
    config: AgentConfig,
    session: LlmSession,
    *,
    context: Any = None,
    model_tag: str = "react",
    hooks: EpisodeHooks | None = None,
) -> Trajectory:
    if not toolset.names():
        raise ValueError("toolset must contain at least one tool")
    hooks = hooks or EpisodeHooks()
    steps: list[AgentStep] = []
    terminal: str | None = None
    prediction: RootCausePrediction | None = None

    for index in range(1, config.max_iterations + 1):
        if hooks.should_abort is not None and hooks.should_abort():
            terminal = "aborted"
            break
        request = render_prompt(
            incident.title,
            incident.summary_description,
            steps,
            toolset.descriptors(),
        )
        try:
            result = session.complete(request)
        except ContextOverflowError:
            terminal = "aborted"
            break
        except GatewayError:
            terminal = "aborted"
            break

        parsed = parse_step(result.text)

        if isinstance(parsed, ParseFailure):
            raw = result.text.strip()
            if hooks.on_thought:
                hooks.on_thought(index, raw, INVALID_ACTION, "")
            if hooks.on_observation:
                hooks.on_observation(index, FORMAT_REMINDER)
            steps.append(
                AgentStep(
                    index=index,
                    thought=raw,
                    action=INVALID_ACTION,
                    action_input="",
                    observation=FORMAT_REMINDER,
                )
            )
            continue

        if isinstance(parsed, ParsedFinal):
            if hooks.on_thought:
                hooks.on_thought(index, parsed.thought, FINAL_ACTION, parsed.answer)
            prediction = RootCausePrediction(
                incident_id=incident.id,
                predicted_root_cause=parsed.answer,
                verdict=classify_verdict(parsed.answer),
                model_tag=model_tag,
            )
            steps.append(
                AgentStep(
                    index=index,
                    thought=parsed.thought,
                    action=FINAL_ACTION,
                    action_input=parsed.answer,
                    observation=None,
                )
            )
            terminal = "final_answer"
            break

        if hooks.on_thought:
            hooks.on_thought(index, parsed.thought, parsed.action, parsed.action_input)

        observation: str | None = None
        if config.approval_required and hooks.gate is not None:
            decision = hooks.gate(index, parsed.action, parsed.action_input)
            if decision.abort:
                abort_note = decision.reason or "episode aborted by operator"
                if hooks.on_observation:
                    hooks.on_observation(index, abort_note)
                steps.append(
                    AgentStep(
                        index=index,
                        thought=parsed.thought,
                        action=parsed.action,
                        action_input=parsed.action_input,
                        observation=abort_note,
                    )
                )
                terminal = "aborted"
                break
            if not decision.approved:
                observation = decision.reason or "action denied by operator"

        if observation is None:
            observation = dispatch(parsed.action, parsed.action_input, toolset, context)
        if hooks.on_observation:
            hooks.on_observation(index, observation)
        steps.append(
            AgentStep(
                index=index,
                thought=parsed.thought,
                action=parsed.action,
                action_input=parsed.action_input,
                observation=observation,
            )
        )

    if terminal is None:
        terminal = "iteration_cap"

    ledger = getattr(context, "ledger", None)
    retrieved_ids = set(ledger.seen) if ledger is not None else set()
    return Trajectory(
        incident_id=incident.id,
        steps=steps,
        terminal=terminal,
        prediction=prediction,
        retrieved_ids=retrieved_ids,
    )
