"""Human interaction: ask the operator a question and wait for the reply."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Protocol

from .base import Tool, ToolContext, ToolDescriptor


class HumanChannel(Protocol):
    """Transport for operator questions; returns None when none arrives."""

    def ask(self, request: str, timeout: float) -> str | None: ...


@dataclass
class ScriptedHuman:
    """Deterministic responder for tests and scenario scripts."""

    responses: list[str]
    _cursor: int = field(default=0)
    requests: list[str] = field(default_factory=list)

    def ask(self, request: str, timeout: float) -> str | None:
        self.requests.append(request)
        if self._cursor >= len(self.responses):
            return None
        response = self.responses[self._cursor]
        self._cursor += 1
        return response


def timeout_message(timeout: float) -> str:
    return f"no human response within {timeout:g} seconds"


def _ask_human(action_input: str, ctx: ToolContext) -> str:
    request = action_input.strip()
    if not request:
        return "provide the question to ask"
    if ctx.human is None:
        return timeout_message(ctx.human_timeout)
    answer = ctx.human.ask(request, ctx.human_timeout)
    if answer is None:
        return timeout_message(ctx.human_timeout)
    return answer


ask_human_tool = Tool(
    descriptor=ToolDescriptor(
        name="ask_human",
        description=(
            "Ask the on-call engineer for diagnostic information; the episode "
            "waits for their reply or times out."
        ),
        input_schema={"request": "text"},
    ),
    fn=_ask_human,
)
