"""Core episode types and their canonical serialization."""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field

from ..corpus.store import config_hash
from ..retrieval.base import RetrievalConfig

TERMINAL_STATES = ("final_answer", "iteration_cap", "aborted")
VERDICTS = ("specific", "insufficient_evidence")

FINAL_ACTION = "FINAL"
# Reserved action recorded when a completion does not parse; the raw text is
# kept as the step's thought and a format reminder becomes the observation.
INVALID_ACTION = "INVALID"


@dataclass
class AgentConfig:
    max_iterations: int = 20
    retrieval: RetrievalConfig = field(default_factory=RetrievalConfig)
    approval_required: bool = False
    human_timeout: float = 30.0

    def __post_init__(self) -> None:
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.human_timeout < 0:
            raise ValueError("human_timeout must be >= 0")


@dataclass
class AgentStep:
    index: int
    thought: str
    action: str
    action_input: str = ""
    observation: str | None = None

    def __post_init__(self) -> None:
        if self.index < 1:
            raise ValueError("step index must be >= 1")
        if not self.action:
            raise ValueError("step action must be non-empty")
        if self.action == FINAL_ACTION:
            if self.observation is not None:
                raise ValueError("a final step carries no observation")
        elif self.observation is None:
            raise ValueError("a non-final step must carry an observation")


@dataclass
class RootCausePrediction:
    incident_id: str
    predicted_root_cause: str
    verdict: str = "specific"
    model_tag: str = ""

    def __post_init__(self) -> None:
        if self.verdict not in VERDICTS:
            raise ValueError(
                f"verdict must be one of {VERDICTS}, got {self.verdict!r}"
            )


@dataclass
class Trajectory:
    incident_id: str
    steps: list[AgentStep] = field(default_factory=list)
    terminal: str = "final_answer"
    prediction: RootCausePrediction | None = None
    retrieved_ids: set[str] = field(default_factory=set)

    def __post_init__(self) -> None:
        if self.terminal not in TERMINAL_STATES:
            raise ValueError(
                f"terminal must be one of {TERMINAL_STATES}, got {self.terminal!r}"
            )
        if (self.terminal == "final_answer") != (self.prediction is not None):
            raise ValueError("prediction present exactly when terminal=final_answer")


def step_to_dict(step: AgentStep) -> dict:
    return {
        "index": step.index,
        "thought": step.thought,
        "action": step.action,
        "action_input": step.action_input,
        "observation": step.observation,
    }


def prediction_to_dict(prediction: RootCausePrediction) -> dict:
    return {
        "incident_id": prediction.incident_id,
        "predicted_root_cause": prediction.predicted_root_cause,
        "verdict": prediction.verdict,
        "model_tag": prediction.model_tag,
    }


def agent_config_hash(config: AgentConfig) -> str:
    return config_hash(dataclasses.asdict(config))


def trajectory_payload(trajectory: Trajectory, config_digest: str) -> dict:
    return {
        "config_hash": config_digest,
        "incident_id": trajectory.incident_id,
        "terminal": trajectory.terminal,
        "retrieved_ids": sorted(trajectory.retrieved_ids),
        "steps": [step_to_dict(s) for s in trajectory.steps],
        "prediction": (
            prediction_to_dict(trajectory.prediction) if trajectory.prediction else None
        ),
    }


def payload_to_json(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, ensure_ascii=False, indent=2)


def trajectory_to_json(trajectory: Trajectory, config: AgentConfig) -> str:
    """Canonical episode serialization: deterministic, timestamp-free."""
    return payload_to_json(trajectory_payload(trajectory, agent_config_hash(config)))


def trajectory_from_json(text: str) -> Trajectory:
    data = json.loads(text)
    steps = [
        AgentStep(
            index=s["index"],
            thought=s["thought"],
            action=s["action"],
            action_input=s["action_input"],
            observation=s["observation"],
        )
        for s in data["steps"]
    ]
    prediction = None
    if data.get("prediction"):
        prediction = RootCausePrediction(**data["prediction"])
    return Trajectory(
        incident_id=data["incident_id"],
        steps=steps,
        terminal=data["terminal"],
        prediction=prediction,
        retrieved_ids=set(data.get("retrieved_ids", [])),
    )
