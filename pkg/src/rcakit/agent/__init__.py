"""Planner loop: prompt rendering, step parsing, dispatch, and budgets."""

from .budget import RetrievalLedger
from .loop import (
    ApprovalDecision,
    EpisodeHooks,
    FORMAT_REMINDER,
    INSUFFICIENT_EVIDENCE_PHRASES,
    classify_verdict,
    dispatch,
    run_episode,
)
from .parser import ParsedAction, ParsedFinal, ParseFailure, parse_step
from .prompts import render_prompt
from .types import (
    FINAL_ACTION,
    INVALID_ACTION,
    TERMINAL_STATES,
    VERDICTS,
    AgentConfig,
    AgentStep,
    RootCausePrediction,
    Trajectory,
    agent_config_hash,
    payload_to_json,
    trajectory_from_json,
    trajectory_payload,
    trajectory_to_json,
)

__all__ = [
    "AgentConfig",
    "AgentStep",
    "ApprovalDecision",
    "EpisodeHooks",
    "FINAL_ACTION",
    "FORMAT_REMINDER",
    "INSUFFICIENT_EVIDENCE_PHRASES",
    "INVALID_ACTION",
    "ParseFailure",
    "ParsedAction",
    "ParsedFinal",
    "RetrievalLedger",
    "RootCausePrediction",
    "TERMINAL_STATES",
    "Trajectory",
    "VERDICTS",
    "agent_config_hash",
    "classify_verdict",
    "dispatch",
    "parse_step",
    "payload_to_json",
    "render_prompt",
    "trajectory_from_json",
    "run_episode",
    "trajectory_payload",
    "trajectory_to_json",
]
