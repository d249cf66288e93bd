"""Deterministic scripted backend; the whole hermetic test surface runs on it."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .core import ChatRequest, GatewayError


class ScriptError(GatewayError):
    """Script exhausted or a matcher rejected the incoming request."""


@dataclass
class ScriptEntry:
    response: str
    expect: Callable[[ChatRequest], bool] | None = None


class ScriptedBackend:
    """Replays a fixed response list in order.

    Each instance holds its own cursor, so distinct sessions never share
    script position. `repeat=True` cycles the script, which lets a short
    adversarial script drive an episode all the way to the iteration cap.
    """

    def __init__(self, entries: list[ScriptEntry | str], *, repeat: bool = False):
        self.entries = [
            e if isinstance(e, ScriptEntry) else ScriptEntry(response=e)
            for e in entries
        ]
        self.repeat = repeat
        self.cursor = 0

    def complete(self, request: ChatRequest) -> str:
        if not self.entries:
            raise ScriptError("script is empty")
        if self.cursor >= len(self.entries):
            if not self.repeat:
                raise ScriptError(
                    f"script exhausted after {len(self.entries)} responses"
                )
            self.cursor = 0
        entry = self.entries[self.cursor]
        if entry.expect is not None and not entry.expect(request):
            raise ScriptError(f"script entry {self.cursor} rejected the request")
        self.cursor += 1
        return entry.response
