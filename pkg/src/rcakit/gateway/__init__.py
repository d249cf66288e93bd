from .core import (
    ChatMessage,
    ChatRequest,
    CompletionResult,
    ContextOverflowError,
    GatewayError,
    LlmSession,
    RetryPolicy,
    TransportError,
    Usage,
    estimate_tokens,
)
from .http import GatewayConfig, HttpChatBackend, make_sessions
from .scripted import ScriptedBackend, ScriptEntry, ScriptError

__all__ = [
    "ChatMessage",
    "ChatRequest",
    "CompletionResult",
    "ContextOverflowError",
    "GatewayConfig",
    "GatewayError",
    "HttpChatBackend",
    "LlmSession",
    "RetryPolicy",
    "ScriptEntry",
    "ScriptError",
    "ScriptedBackend",
    "TransportError",
    "Usage",
    "estimate_tokens",
    "make_sessions",
]
