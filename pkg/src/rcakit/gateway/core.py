"""Chat-completion sessions: request shape, retries, usage accounting.

A session wraps one backend (remote HTTP or scripted) and owns sequential
call state: per-call usage estimates, session totals, retry handling, and
the context-limit guard. Two roles are configured separately in practice:
a "planner" session drives the agent loop and a cheaper "utility" session
serves summarization and tool-internal question answering.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, Protocol

from ..text import estimate_llm_tokens

ROLES = ("system", "user", "assistant")


class GatewayError(Exception):
    """Base class for completion failures."""


class TransportError(GatewayError):
    """Network-class failure; eligible for retry."""


class ContextOverflowError(GatewayError):
    """Request would not fit the configured context window; never retried."""

    def __init__(self, estimated: int, limit: int):
        super().__init__(
            f"prompt estimate of {estimated} tokens exceeds context limit {limit}"
        )
        self.estimated = estimated
        self.limit = limit


@dataclass
class ChatMessage:
    role: str
    content: str


@dataclass
class ChatRequest:
    messages: list[ChatMessage]
    max_tokens: int = 1024
    temperature: float = 0.0
    stop_sequences: list[str] = field(default_factory=list)

    def __post_init__(self):
        if not self.messages:
            raise ValueError("messages must be non-empty")
        for m in self.messages:
            if m.role not in ROLES:
                raise ValueError(f"unknown message role {m.role!r}")
        if self.messages[0].role not in ("system", "user"):
            raise ValueError("first message role must be system or user")

    def prompt_text(self) -> str:
        return "\n".join(m.content for m in self.messages)


@dataclass
class Usage:
    prompt_tokens: int = 0
    completion_tokens: int = 0

    def add(self, other: "Usage") -> None:
        self.prompt_tokens += other.prompt_tokens
        self.completion_tokens += other.completion_tokens

    @property
    def total_tokens(self) -> int:
        return self.prompt_tokens + self.completion_tokens


@dataclass
class CompletionResult:
    text: str
    usage: Usage


class Backend(Protocol):
    def complete(self, request: ChatRequest) -> str: ...


@dataclass
class RetryPolicy:
    attempts: int = 3
    base_delay: float = 0.5
    sleeper: Callable[[float], None] = time.sleep

    def run(self, fn: Callable[[], str]) -> str:
        last: TransportError | None = None
        for attempt in range(self.attempts):
            try:
                return fn()
            except TransportError as exc:
                last = exc
                if attempt + 1 < self.attempts:
                    self.sleeper(self.base_delay * (2**attempt))
        assert last is not None
        raise last


def estimate_tokens(text: str) -> int:
    """Token estimate used for usage accounting and context-limit checks."""
    return estimate_llm_tokens(text)


class LlmSession:
    """Sequential completion session over one backend.

    Calls are checked against `context_limit` before the backend is invoked;
    transport failures are retried per `retry`; per-call usage estimates
    accumulate into `usage`.
    """

    def __init__(
        self,
        backend: Backend,
        *,
        context_limit: int = 8000,
        retry: RetryPolicy | None = None,
        estimator: Callable[[str], int] = estimate_tokens,
    ):
        self.backend = backend
        self.context_limit = context_limit
        self.retry = retry or RetryPolicy()
        self.estimator = estimator
        self.usage = Usage()
        self.calls: list[Usage] = []

    def complete(self, request: ChatRequest) -> CompletionResult:
        prompt_estimate = self.estimator(request.prompt_text())
        if prompt_estimate > self.context_limit:
            raise ContextOverflowError(prompt_estimate, self.context_limit)
        text = self.retry.run(lambda: self.backend.complete(request))
        usage = Usage(prompt_estimate, self.estimator(text))
        self.calls.append(usage)
        self.usage.add(usage)
        return CompletionResult(text=text, usage=usage)
