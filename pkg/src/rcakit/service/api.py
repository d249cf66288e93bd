"""HTTP surface for diagnostic sessions: create, list, stream (SSE with
resume), poll, respond, and replay. Event streams are resumable via the
Last-Event-ID header or an ?after= cursor, with no gaps or duplicates."""

from __future__ import annotations

import json

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, Response, StreamingResponse

from ..agent.types import payload_to_json, trajectory_payload
from .sessions import Session, SessionManager, SessionStateError, trajectory_from_events

SSE_KEEPALIVE_SECONDS = 10.0


def _key_message(exc: KeyError) -> str:
    return exc.args[0] if exc.args else str(exc)


def _error(status: int, message: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"detail": message})


def _sse_frame(seq: int, kind: str, data: dict) -> str:
    return f"id: {seq}\nevent: {kind}\ndata: {json.dumps(data, ensure_ascii=False)}\n\n"


def _resume_cursor(request: Request) -> int:
    """SSE resume point: Last-Event-ID header wins over the ?after= query."""
    raw = request.headers.get("last-event-id") or request.query_params.get("after", "0")
    try:
        return max(0, int(raw))
    except ValueError:
        return 0


def _event_stream(session: Session, after: int):
    cursor = after
    while True:
        events, done = session.wait_events(cursor, timeout=SSE_KEEPALIVE_SECONDS)
        for event in events:
            cursor = event.seq
            yield _sse_frame(event.seq, event.kind, event.to_dict())
        if done:
            yield _sse_frame(cursor, "end", {"state": session.state})
            return
        if not events:
            yield ": keepalive\n\n"


def create_app(manager: SessionManager) -> FastAPI:
    app = FastAPI(title="rcakit session service")
    # The operator console is served as static files from some other origin
    # (or file://); the service is local-only, so allow any origin to call it.
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["GET", "POST"],
        allow_headers=["*"],
    )
    app.state.manager = manager

    @app.get("/meta")
    def meta() -> dict:
        launcher = manager.launcher
        incidents = list(getattr(launcher, "incident_ids", tuple)())
        return {"incidents": incidents, "modes": list(launcher.modes())}

    @app.post("/sessions")
    async def create_session(request: Request):
        try:
            body = await request.json()
        except Exception:
            return _error(400, "request body must be a JSON object")
        if not isinstance(body, dict):
            return _error(400, "request body must be a JSON object")
        incident_id = body.get("incident_id")
        mode = body.get("mode")
        if not incident_id or not mode:
            return _error(400, "incident_id and mode are required")
        try:
            session = manager.create_session(
                str(incident_id),
                str(mode),
                approval_required=bool(body.get("approval_required", False)),
                human_timeout=body.get("human_timeout"),
            )
        except KeyError as exc:
            return _error(404, _key_message(exc))
        return JSONResponse(status_code=201, content=session.snapshot())

    @app.get("/sessions")
    def list_sessions() -> dict:
        return {"sessions": [s.snapshot() for s in manager.list_sessions()]}

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        try:
            session = manager.get(session_id)
        except KeyError as exc:
            return _error(404, _key_message(exc))
        return session.snapshot()

    @app.get("/sessions/{session_id}/events.json")
    def poll_events(session_id: str, after: int = 0):
        try:
            session = manager.get(session_id)
        except KeyError as exc:
            return _error(404, _key_message(exc))
        events = session.events_after(after)
        return {
            "events": [e.to_dict() for e in events],
            "state": session.state,
            "done": session.is_terminal and after + len(events) == session.event_count(),
        }

    @app.get("/sessions/{session_id}/events")
    def stream_events(session_id: str, request: Request):
        try:
            session = manager.get(session_id)
        except KeyError as exc:
            return _error(404, _key_message(exc))
        cursor = _resume_cursor(request)
        return StreamingResponse(
            _event_stream(session, cursor),
            media_type="text/event-stream",
            headers={
                "Cache-Control": "no-cache",
                "Connection": "keep-alive",
                "X-Accel-Buffering": "no",
            },
        )

    @app.post("/sessions/{session_id}/respond")
    async def respond(session_id: str, request: Request):
        try:
            session = manager.get(session_id)
        except KeyError as exc:
            return _error(404, _key_message(exc))
        try:
            body = await request.json()
        except Exception:
            return _error(400, "request body must be a JSON object")
        if not isinstance(body, dict):
            return _error(400, "request body must be a JSON object")
        action = body.get("action", "")
        text = body.get("text", "") or ""
        try:
            session.respond(str(action), str(text))
        except SessionStateError as exc:
            return _error(409, str(exc))
        except ValueError as exc:
            return _error(400, str(exc))
        return {"ok": True, "state": session.state}

    @app.get("/sessions/{session_id}/trajectory")
    def trajectory(session_id: str):
        try:
            session = manager.get(session_id)
        except KeyError as exc:
            return _error(404, _key_message(exc))
        if not session.is_terminal:
            return _error(409, f"session state is '{session.state}', not terminal")
        try:
            replayed, digest = trajectory_from_events(session.events_after(0))
        except ValueError as exc:
            return _error(409, str(exc))
        return Response(
            content=payload_to_json(trajectory_payload(replayed, digest)),
            media_type="application/json",
        )

    return app
