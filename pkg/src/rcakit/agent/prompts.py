"""Zero-shot prompt rendering for the planner loop.

The system message carries the task instruction, the tool catalog (each tool
listed exactly once with its description and input fields), and the reply
format. The user message carries the incident and the full step history.
No few-shot exemplars are included, and the prompt never pre-writes a
"Thought:" label for the model.
"""

from __future__ import annotations

from typing import Iterable, Protocol

from ..gateway.core import ChatMessage, ChatRequest
from .types import AgentStep, INVALID_ACTION


class ToolInfo(Protocol):
    name: str
    description: str
    input_schema: dict[str, str]


SYSTEM_TEMPLATE = """\
You are an on-call engineer investigating a production incident. Determine \
the incident's root cause using the tools below.

Tools:
{tools_block}

Reply with exactly one step per turn, in this format:

Thought: your reasoning about what to do next
Action: one tool name from the catalog above
Action Input: the input for that tool

After each action you will receive:

Observation: the tool's output (written for you; never write it yourself)

When the evidence is sufficient, finish with:

Thought: your reasoning about the conclusion
Final Answer: the root cause of the incident

Ground every claim in observations. If the evidence gathered is insufficient \
to determine a root cause, say so in your final answer and state what is \
missing instead of guessing."""


def _schema_text(schema: dict[str, str]) -> str:
    if not schema:
        return "none"
    return ", ".join(f"{name} ({kind})" for name, kind in schema.items())


def render_tools_block(descriptors: Iterable[ToolInfo]) -> str:
    lines = []
    for d in descriptors:
        lines.append(f"- {d.name} — {d.description} Input fields: {_schema_text(d.input_schema)}.")
    return "\n".join(lines)


def render_history(steps: Iterable[AgentStep]) -> str:
    blocks: list[str] = []
    for step in steps:
        if step.action == INVALID_ACTION:
            # The raw completion did not parse; echo it back untouched.
            blocks.append(step.thought)
        else:
            blocks.append(
                f"Thought: {step.thought}\n"
                f"Action: {step.action}\n"
                f"Action Input: {step.action_input}"
            )
        blocks.append(f"Observation: {step.observation}")
    return "\n".join(blocks)


def render_prompt(
    incident_title: str,
    incident_description: str,
    steps: list[AgentStep],
    descriptors: Iterable[ToolInfo],
    *,
    max_tokens: int = 1024,
) -> ChatRequest:
    system = SYSTEM_TEMPLATE.format(tools_block=render_tools_block(descriptors))
    user_parts = [
        f"Incident: {incident_title}",
        "",
        incident_description or "(no description available)",
        "",
    ]
    history = render_history(steps)
    if history:
        user_parts.extend([history, ""])
    user_parts.append("Continue." if steps else "Begin.")
    return ChatRequest(
        messages=[
            ChatMessage(role="system", content=system),
            ChatMessage(role="user", content="\n".join(user_parts)),
        ],
        max_tokens=max_tokens,
        stop_sequences=["\nObservation:"],
    )
