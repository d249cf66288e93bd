"""Long-running diagnostic sessions: each session drives one episode on a
worker thread, records everything that happens as an append-only event log,
and exposes operator controls (approval gates, human answers, abort).

The event log is the source of truth: it streams to clients, persists as a
JSON Lines file, and replays back into the exact trajectory serialization
the episode loop itself produces.
"""

from __future__ import annotations

import dataclasses
import json
import threading
import uuid
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Protocol, Sequence

from ..agent.loop import ApprovalDecision, EpisodeHooks
from ..agent.types import (
    FINAL_ACTION,
    AgentConfig,
    AgentStep,
    RootCausePrediction,
    Trajectory,
    agent_config_hash,
    prediction_to_dict,
)

SESSION_STATES = (
    "running",
    "awaiting_approval",
    "awaiting_human",
    "finished",
    "aborted",
)

EVENT_KINDS = (
    "thought",
    "action_proposed",
    "action_approved",
    "action_denied",
    "observation",
    "human_request",
    "human_response",
    "final",
    "error",
)

RESPOND_ACTIONS = ("approve", "deny", "human_answer", "interject", "abort")

ABORT_NOTE = "episode aborted by operator"


class SessionStateError(ValueError):
    """A respond action that does not match the session's current state."""


@dataclass(frozen=True)
class SessionEvent:
    seq: int
    kind: str
    payload: dict
    at: str

    def __post_init__(self) -> None:
        if self.seq < 1:
            raise ValueError("event seq starts at 1")
        if self.kind not in EVENT_KINDS:
            raise ValueError(f"unknown event kind '{self.kind}'")

    def to_dict(self) -> dict:
        return {
            "seq": self.seq,
            "kind": self.kind,
            "payload": self.payload,
            "at": self.at,
        }


def event_from_dict(data: dict) -> SessionEvent:
    return SessionEvent(
        seq=data["seq"],
        kind=data["kind"],
        payload=data["payload"],
        at=data["at"],
    )


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


class EpisodeLauncher(Protocol):
    """Builds and runs one episode for a session.

    Implementations choose the toolset, backends, and context; the session
    supplies the hooks (event emission, approval gate) and, when the episode
    uses a human tool, the operator-backed channel.
    """

    def incident_exists(self, incident_id: str) -> bool: ...

    def mode_exists(self, mode: str) -> bool: ...

    def modes(self) -> tuple[str, ...]: ...

    def launch(
        self,
        incident_id: str,
        mode: str,
        config: AgentConfig,
        hooks: EpisodeHooks,
        human: "SessionHumanChannel",
    ) -> Trajectory: ...


class SessionHumanChannel:
    """Human channel that parks the episode in awaiting_human until an
    operator answers (or the timeout elapses)."""

    def __init__(self, session: "Session"):
        self._session = session

    def ask(self, request: str, timeout: float) -> str | None:
        return self._session._ask_human(request, timeout)


class Session:
    """One episode run: state machine, event log, and operator mailbox.

    States move running -> awaiting_approval -> running (via approve/deny),
    running -> awaiting_human -> running (via human_answer or timeout), and
    end at finished or aborted. Events are append-only with seq from 1.
    """

    def __init__(
        self,
        session_id: str,
        incident_id: str,
        mode: str,
        config: AgentConfig,
        *,
        persist_path: Path | None = None,
        read_only: bool = False,
    ):
        self.id = session_id
        self.incident_id = incident_id
        self.mode = mode
        self.config = config
        self.created_at = _now()
        self.read_only = read_only
        self.trajectory: Trajectory | None = None
        self.state = "running"
        self._cond = threading.Condition()
        self._events: list[SessionEvent] = []
        self._persist_path = persist_path
        self._gate_decision: ApprovalDecision | None = None
        self._human_answer: str | None = None
        self._human_answered = False
        self._abort_requested = False
        self.thread: threading.Thread | None = None

    # -- event log ---------------------------------------------------------

    def _append(self, kind: str, payload: dict) -> SessionEvent:
        """Append one event. Caller must hold the condition lock."""
        event = SessionEvent(
            seq=len(self._events) + 1, kind=kind, payload=payload, at=_now()
        )
        self._events.append(event)
        if self._persist_path is not None:
            line = json.dumps(event.to_dict(), sort_keys=True, ensure_ascii=False)
            with open(self._persist_path, "a", encoding="utf-8") as fh:
                fh.write(line + "\n")
        self._cond.notify_all()
        return event

    def append_event(self, kind: str, payload: dict) -> SessionEvent:
        with self._cond:
            return self._append(kind, payload)

    def events_after(self, seq: int) -> list[SessionEvent]:
        with self._cond:
            return [e for e in self._events if e.seq > seq]

    def event_count(self) -> int:
        with self._cond:
            return len(self._events)

    @property
    def is_terminal(self) -> bool:
        return self.state in ("finished", "aborted")

    def wait_events(
        self, after_seq: int, timeout: float | None = None
    ) -> tuple[list[SessionEvent], bool]:
        """Block until events past after_seq exist (or the session ends).

        Returns (new events, done) where done means the session is terminal
        and every event has been handed out.
        """
        with self._cond:
            self._cond.wait_for(
                lambda: len(self._events) > after_seq or self.is_terminal,
                timeout=timeout,
            )
            fresh = [e for e in self._events if e.seq > after_seq]
            done = self.is_terminal and after_seq + len(fresh) == len(self._events)
            return fresh, done

    def snapshot(self) -> dict:
        with self._cond:
            return {
                "id": self.id,
                "incident_id": self.incident_id,
                "mode": self.mode,
                "state": self.state,
                "event_count": len(self._events),
                "created_at": self.created_at,
                "approval_required": self.config.approval_required,
                "read_only": self.read_only,
            }

    # -- operator mailbox ----------------------------------------------------

    def respond(self, action: str, text: str = "") -> None:
        if action not in RESPOND_ACTIONS:
            raise ValueError(
                f"unknown respond action '{action}'; expected one of: "
                + ", ".join(RESPOND_ACTIONS)
            )
        with self._cond:
            if self.is_terminal or self.read_only:
                raise SessionStateError(
                    f"cannot {action}: session state is '{self.state}'"
                )
            if action in ("approve", "deny", "interject"):
                if self.state != "awaiting_approval":
                    raise SessionStateError(
                        f"cannot {action}: session state is '{self.state}', "
                        "not 'awaiting_approval'"
                    )
                if self._gate_decision is not None:
                    raise SessionStateError(
                        f"cannot {action}: a decision is already pending"
                    )
                if action == "approve":
                    self._gate_decision = ApprovalDecision(approved=True)
                else:
                    self._gate_decision = ApprovalDecision(
                        approved=False, reason=text
                    )
            elif action == "human_answer":
                if self.state != "awaiting_human":
                    raise SessionStateError(
                        f"cannot human_answer: session state is '{self.state}', "
                        "not 'awaiting_human'"
                    )
                self._human_answer = text
                self._human_answered = True
            else:  # abort
                self._abort_requested = True
            self._cond.notify_all()

    # -- hooks driven by the episode thread ----------------------------------

    def _on_thought(self, index: int, thought: str, action: str, action_input: str) -> None:
        self.append_event(
            "thought",
            {
                "index": index,
                "thought": thought,
                "action": action,
                "action_input": action_input,
            },
        )

    def _on_observation(self, index: int, observation: str) -> None:
        self.append_event("observation", {"index": index, "observation": observation})

    def _gate(self, index: int, action: str, action_input: str) -> ApprovalDecision:
        with self._cond:
            if self._abort_requested:
                return ApprovalDecision(approved=False, abort=True, reason=ABORT_NOTE)
            self._append(
                "action_proposed",
                {"index": index, "action": action, "action_input": action_input},
            )
            self.state = "awaiting_approval"
            self._cond.notify_all()
            self._cond.wait_for(
                lambda: self._gate_decision is not None or self._abort_requested
            )
            self.state = "running"
            if self._gate_decision is None:
                decision = ApprovalDecision(approved=False, abort=True, reason=ABORT_NOTE)
                self._append(
                    "action_denied", {"index": index, "action": action, "text": ABORT_NOTE}
                )
            else:
                decision = self._gate_decision
                self._gate_decision = None
                if decision.approved:
                    self._append("action_approved", {"index": index, "action": action})
                else:
                    self._append(
                        "action_denied",
                        {"index": index, "action": action, "text": decision.reason},
                    )
            self._cond.notify_all()
            return decision

    def _ask_human(self, request: str, timeout: float) -> str | None:
        with self._cond:
            if self._abort_requested:
                return None
            self._append("human_request", {"request": request, "timeout": timeout})
            self.state = "awaiting_human"
            self._cond.notify_all()
            self._cond.wait_for(
                lambda: self._human_answered or self._abort_requested,
                timeout=timeout if timeout > 0 else None,
            )
            self.state = "running"
            answer: str | None = None
            if self._human_answered:
                answer = self._human_answer
                self._human_answered = False
                self._human_answer = None
                self._append("human_response", {"text": answer})
            self._cond.notify_all()
            return answer

    def hooks(self) -> EpisodeHooks:
        return EpisodeHooks(
            on_thought=self._on_thought,
            gate=self._gate,
            on_observation=self._on_observation,
            should_abort=lambda: self._abort_requested,
        )

    def channel(self) -> SessionHumanChannel:
        return SessionHumanChannel(self)

    # -- terminal transitions (episode thread) --------------------------------

    def finish(self, trajectory: Trajectory) -> None:
        with self._cond:
            self.trajectory = trajectory
            self._append(
                "final",
                {
                    "incident_id": trajectory.incident_id,
                    "terminal": trajectory.terminal,
                    "prediction": (
                        prediction_to_dict(trajectory.prediction)
                        if trajectory.prediction
                        else None
                    ),
                    "retrieved_ids": sorted(trajectory.retrieved_ids),
                    "config_hash": agent_config_hash(self.config),
                },
            )
            self.state = "aborted" if trajectory.terminal == "aborted" else "finished"
            self._cond.notify_all()

    def fail(self, message: str) -> None:
        with self._cond:
            self._append("error", {"message": message})
            self.state = "aborted"
            self._cond.notify_all()


def trajectory_from_events(
    events: Sequence[SessionEvent],
) -> tuple[Trajectory, str]:
    """Rebuild the episode trajectory and its config hash from an event log.

    thought/observation pairs become steps, the final event carries the
    terminal state, prediction, retrieved ids, and config hash; gate and
    human events are operator chatter and contribute no steps.
    """
    steps: list[AgentStep] = []
    pending: dict | None = None
    final: dict | None = None
    for event in events:
        if event.kind == "thought":
            if pending is not None:
                raise ValueError(
                    f"event log corrupt: step {pending['index']} has no observation"
                )
            pending = event.payload
        elif event.kind == "observation":
            if pending is None or pending["index"] != event.payload["index"]:
                raise ValueError(
                    f"event log corrupt: stray observation at seq {event.seq}"
                )
            steps.append(
                AgentStep(
                    index=pending["index"],
                    thought=pending["thought"],
                    action=pending["action"],
                    action_input=pending["action_input"],
                    observation=event.payload["observation"],
                )
            )
            pending = None
        elif event.kind == "final":
            final = event.payload
    if final is None:
        raise ValueError("event log has no final event")
    if pending is not None:
        if pending["action"] != FINAL_ACTION:
            raise ValueError(
                f"event log corrupt: step {pending['index']} has no observation"
            )
        steps.append(
            AgentStep(
                index=pending["index"],
                thought=pending["thought"],
                action=pending["action"],
                action_input=pending["action_input"],
                observation=None,
            )
        )
    prediction = None
    if final["prediction"] is not None:
        prediction = RootCausePrediction(**final["prediction"])
    trajectory = Trajectory(
        incident_id=final["incident_id"],
        steps=steps,
        terminal=final["terminal"],
        prediction=prediction,
        retrieved_ids=set(final["retrieved_ids"]),
    )
    return trajectory, final["config_hash"]


def _read_session_file(path: Path) -> Session:
    """Recover one persisted session as read-only. A file without a final
    event belonged to a session that was live at shutdown: it comes back
    aborted."""
    meta: dict | None = None
    events: list[SessionEvent] = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            data = json.loads(line)
            if "meta" in data:
                meta = data["meta"]
            else:
                events.append(event_from_dict(data))
    if meta is None:
        raise ValueError(f"{path}: missing session meta line")
    config = AgentConfig(approval_required=meta.get("approval_required", False))
    session = Session(
        meta["id"],
        meta["incident_id"],
        meta["mode"],
        config,
        read_only=True,
    )
    session.created_at = meta.get("created_at", session.created_at)
    session._events = events
    terminal = None
    for event in events:
        if event.kind == "final":
            terminal = event.payload["terminal"]
    if terminal is None or terminal == "aborted":
        session.state = "aborted"
    else:
        session.state = "finished"
    return session


class SessionManager:
    """Creates sessions, runs their episodes on worker threads, and recovers
    persisted sessions (read-only) at startup."""

    def __init__(
        self,
        launcher: EpisodeLauncher,
        *,
        persist_dir: Path | str | None = None,
        base_config: AgentConfig | None = None,
    ):
        self._launcher = launcher
        self._base_config = base_config or AgentConfig()
        self._persist_dir = Path(persist_dir) if persist_dir is not None else None
        self._sessions: dict[str, Session] = {}
        self._lock = threading.Lock()
        if self._persist_dir is not None:
            self._persist_dir.mkdir(parents=True, exist_ok=True)
            for path in sorted(self._persist_dir.glob("*.jsonl")):
                session = _read_session_file(path)
                self._sessions[session.id] = session

    @property
    def launcher(self) -> EpisodeLauncher:
        return self._launcher

    def create_session(
        self,
        incident_id: str,
        mode: str,
        *,
        approval_required: bool = False,
        human_timeout: float | None = None,
    ) -> Session:
        if not self._launcher.incident_exists(incident_id):
            raise KeyError(f"unknown incident '{incident_id}'")
        if not self._launcher.mode_exists(mode):
            available = ", ".join(self._launcher.modes())
            raise KeyError(f"unknown mode '{mode}'; available: {available}")
        config = dataclasses.replace(
            self._base_config,
            approval_required=approval_required,
            human_timeout=(
                human_timeout
                if human_timeout is not None
                else self._base_config.human_timeout
            ),
        )
        session_id = uuid.uuid4().hex[:12]
        persist_path = None
        if self._persist_dir is not None:
            persist_path = self._persist_dir / f"{session_id}.jsonl"
        session = Session(
            session_id, incident_id, mode, config, persist_path=persist_path
        )
        if persist_path is not None:
            meta = {
                "meta": {
                    "id": session_id,
                    "incident_id": incident_id,
                    "mode": mode,
                    "approval_required": approval_required,
                    "created_at": session.created_at,
                    "config_hash": agent_config_hash(config),
                }
            }
            with open(persist_path, "w", encoding="utf-8") as fh:
                fh.write(json.dumps(meta, sort_keys=True, ensure_ascii=False) + "\n")
        with self._lock:
            self._sessions[session_id] = session
        thread = threading.Thread(
            target=self._drive, args=(session,), name=f"session-{session_id}", daemon=True
        )
        session.thread = thread
        thread.start()
        return session

    def _drive(self, session: Session) -> None:
        try:
            trajectory = self._launcher.launch(
                session.incident_id,
                session.mode,
                session.config,
                session.hooks(),
                session.channel(),
            )
        except Exception as exc:  # backend hard failures become error events
            session.fail(str(exc))
            return
        session.finish(trajectory)

    def get(self, session_id: str) -> Session:
        with self._lock:
            if session_id not in self._sessions:
                raise KeyError(f"unknown session '{session_id}'")
            return self._sessions[session_id]

    def list_sessions(self) -> list[Session]:
        with self._lock:
            return list(self._sessions.values())

    def join(self, session_id: str, timeout: float | None = None) -> None:
        session = self.get(session_id)
        if session.thread is not None:
            session.thread.join(timeout=timeout)
