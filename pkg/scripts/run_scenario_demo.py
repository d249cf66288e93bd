"""Run a shipped scenario end to end and print the investigation transcript.

Usage:
    python3 scripts/run_scenario_demo.py [scenario] [script]

Defaults to the setting-drift scenario's first scripted path. Everything is
offline: the planner is a scripted backend bundled with the scenario file.
"""

from __future__ import annotations

import sys

from rcakit.simenv.runner import run_scenario, shipped_scenario_path
from rcakit.simenv.scenario import load_scenario


def main() -> int:
    name = sys.argv[1] if len(sys.argv) > 1 else "setting_drift"
    script = sys.argv[2] if len(sys.argv) > 2 else "outcome1"
    scenario = load_scenario(shipped_scenario_path(name))
    run = run_scenario(scenario, script)

    print(f"scenario: {scenario.id}  script: {script}")
    print(f"incident: {scenario.incident.id}  {scenario.incident.title}")
    print("-" * 72)
    for step in run.trajectory.steps:
        print(f"[{step.index}] thought: {step.thought}")
        print(f"    action: {step.action}")
        if step.action_input:
            print(f"    input:  {step.action_input}")
        if step.observation is not None:
            indented = step.observation.replace("\n", "\n            ")
            print(f"    observed: {indented}")
    print("-" * 72)
    print(f"terminal: {run.trajectory.terminal}")
    if run.trajectory.prediction:
        print(f"prediction: {run.trajectory.prediction.predicted_root_cause}")
        print(f"verdict: {run.trajectory.prediction.verdict}")
    print(f"matched outcome: {run.judgment.matched_outcome or 'none'}")
    for outcome_id, results in run.judgment.details.items():
        mark = "match" if outcome_id in run.judgment.all_matched else "no match"
        print(f"  {outcome_id}: {mark}")
        for result in results:
            status = "pass" if result.passed else "FAIL"
            print(f"    [{status}] {result.rule}: {result.detail}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
