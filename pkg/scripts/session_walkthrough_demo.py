"""Drive a gated live session headlessly: approve, deny, and read the log.

Usage:
    python3 scripts/session_walkthrough_demo.py

Starts the session service machinery in-process (no HTTP), launches the
setting-drift scenario with action gating on, plays the operator by approving
every proposed action except one denial, and prints the resulting event log.
The same flow is available over HTTP via `rcakit serve` + `rcakit respond`
or any SSE client.
"""

from __future__ import annotations

import time

from rcakit.agent.types import AgentConfig, payload_to_json, trajectory_payload
from rcakit.service.launchers import ScenarioLauncher
from rcakit.service.sessions import SessionManager, trajectory_from_events
from rcakit.simenv.runner import shipped_scenario_path
from rcakit.simenv.scenario import load_scenario

POLL = 0.005


def main() -> int:
    scenario = load_scenario(shipped_scenario_path("setting_drift"))
    manager = SessionManager(ScenarioLauncher(scenario), base_config=AgentConfig())
    session = manager.create_session(
        "INC-SIM-001", "outcome2", approval_required=True
    )
    print(f"session {session.id} started (state: {session.state})")

    # Operator loop: approve proposals as they arrive, denying the third one
    # with advice; the denial text becomes that step's observation.
    proposal_count = 0
    last_proposal_seq = 0
    deadline = time.monotonic() + 30.0
    while not session.is_terminal:
        if time.monotonic() > deadline:
            raise RuntimeError("session never finished")
        proposals = [
            e
            for e in session.events_after(last_proposal_seq)
            if e.kind == "action_proposed"
        ]
        if proposals and session.state == "awaiting_approval":
            proposal = proposals[0]
            last_proposal_seq = proposal.seq
            proposal_count += 1
            action = proposal.payload["action"]
            if proposal_count == 3:
                print(f"operator: DENY {action} (the table already shows the answer)")
                session.respond(
                    "deny", "the cluster names are already visible in table t1"
                )
            else:
                print(f"operator: approve {action}")
                session.respond("approve")
        else:
            time.sleep(POLL)

    manager.join(session.id)
    print(f"\nsession finished (state: {session.state}); event log:")
    for event in session.events_after(0):
        summary = str(event.payload)
        if len(summary) > 96:
            summary = summary[:93] + "..."
        print(f"  {event.seq:>2} {event.kind:<16} {summary}")

    trajectory, config_hash = trajectory_from_events(session.events_after(0))
    replay = payload_to_json(trajectory_payload(trajectory, config_hash))
    print(f"\ntrajectory replayed from the event log: {len(replay)} bytes of JSON")
    print(f"denied step observation: {trajectory.steps[2].observation!r}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
