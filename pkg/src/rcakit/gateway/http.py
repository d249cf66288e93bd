"""Remote chat-completion adapter speaking the common JSON wire protocol."""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Any, Callable

from .core import ChatRequest, GatewayError, LlmSession, RetryPolicy, TransportError

PostFn = Callable[[str, dict, dict, float], dict]


def _default_post(url: str, payload: dict, headers: dict, timeout: float) -> dict:
    import httpx

    try:
        resp = httpx.post(url, json=payload, headers=headers, timeout=timeout)
    except httpx.HTTPError as exc:
        raise TransportError(str(exc)) from exc
    if resp.status_code == 429 or resp.status_code >= 500:
        raise TransportError(f"HTTP {resp.status_code}")
    if resp.status_code >= 400:
        raise GatewayError(f"HTTP {resp.status_code}: {resp.text[:200]}")
    return resp.json()


@dataclass
class GatewayConfig:
    endpoint: str = ""
    planner_model: str = "planner"
    utility_model: str = "utility"
    api_key_env: str = "RCAKIT_API_KEY"
    timeout_s: float = 60.0
    context_limit: int = 8000


class HttpChatBackend:
    """POSTs chat-completion requests to a JSON endpoint.

    The transport function is injectable so the adapter is unit-testable
    without a network; operational errors map to TransportError (retried)
    or GatewayError (surfaced).
    """

    def __init__(
        self,
        endpoint: str,
        model: str,
        *,
        api_key: str | None = None,
        timeout_s: float = 60.0,
        post: PostFn = _default_post,
    ):
        self.endpoint = endpoint
        self.model = model
        self.api_key = api_key
        self.timeout_s = timeout_s
        self.post = post

    def complete(self, request: ChatRequest) -> str:
        payload: dict[str, Any] = {
            "model": self.model,
            "messages": [
                {"role": m.role, "content": m.content} for m in request.messages
            ],
            "max_tokens": request.max_tokens,
            "temperature": request.temperature,
        }
        if request.stop_sequences:
            payload["stop"] = request.stop_sequences
        headers = {"Content-Type": "application/json"}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        body = self.post(self.endpoint, payload, headers, self.timeout_s)
        try:
            return body["choices"][0]["message"]["content"]
        except (KeyError, IndexError, TypeError) as exc:
            raise GatewayError(f"malformed completion response: {body!r:.200}") from exc


def make_sessions(
    config: GatewayConfig, *, retry: RetryPolicy | None = None
) -> tuple[LlmSession, LlmSession]:
    """Build (planner, utility) sessions from one gateway config."""
    api_key = os.environ.get(config.api_key_env) or None
    sessions = []
    for model in (config.planner_model, config.utility_model):
        backend = HttpChatBackend(
            config.endpoint, model, api_key=api_key, timeout_s=config.timeout_s
        )
        sessions.append(
            LlmSession(backend, context_limit=config.context_limit, retry=retry)
        )
    return sessions[0], sessions[1]
