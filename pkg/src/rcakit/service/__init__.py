"""Session service: threaded episode sessions with append-only event logs,
operator controls, and an HTTP/SSE surface."""

from .api import create_app
from .launchers import CorpusLauncher, ScenarioLauncher
from .sessions import (
    ABORT_NOTE,
    EVENT_KINDS,
    RESPOND_ACTIONS,
    SESSION_STATES,
    EpisodeLauncher,
    Session,
    SessionEvent,
    SessionHumanChannel,
    SessionManager,
    SessionStateError,
    event_from_dict,
    trajectory_from_events,
)

__all__ = [
    "ABORT_NOTE",
    "CorpusLauncher",
    "EVENT_KINDS",
    "EpisodeLauncher",
    "RESPOND_ACTIONS",
    "SESSION_STATES",
    "ScenarioLauncher",
    "Session",
    "SessionEvent",
    "SessionHumanChannel",
    "SessionManager",
    "SessionStateError",
    "create_app",
    "event_from_dict",
    "trajectory_from_events",
]
