"""Workbench configuration: one YAML file covering the chat gateway,
retrieval knobs, episode limits, and service settings. The API key is never
read from the file — only from the environment variable the file names."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from pathlib import Path

import yaml

from .agent.types import AgentConfig
from .gateway.http import GatewayConfig
from .retrieval.base import RetrievalConfig


@dataclass
class ServiceConfig:
    host: str = "127.0.0.1"
    port: int = 8765
    persist_dir: str = ""
    approval_required: bool = False
    human_timeout: float = 30.0

    def __post_init__(self) -> None:
        if not 1 <= self.port <= 65535:
            raise ValueError("port must be in [1, 65535]")
        if self.human_timeout < 0:
            raise ValueError("human_timeout must be >= 0")


@dataclass
class WorkbenchConfig:
    gateway: GatewayConfig = field(default_factory=GatewayConfig)
    retrieval: RetrievalConfig = field(default_factory=RetrievalConfig)
    agent: AgentConfig = field(default_factory=AgentConfig)
    service: ServiceConfig = field(default_factory=ServiceConfig)

    def __post_init__(self) -> None:
        # the agent's retrieval knobs come from the shared retrieval section
        self.agent = dataclasses.replace(self.agent, retrieval=self.retrieval)


_SECTIONS = {
    "gateway": GatewayConfig,
    "retrieval": RetrievalConfig,
    "agent": AgentConfig,
    "service": ServiceConfig,
}


def _build_section(name: str, cls, data: dict):
    allowed = {f.name for f in dataclasses.fields(cls)}
    if name == "agent":
        allowed.discard("retrieval")  # set from the retrieval section, not YAML
    unknown = sorted(set(data) - allowed)
    if unknown:
        raise ValueError(
            f"unknown key '{unknown[0]}' in section '{name}'; "
            f"allowed: {', '.join(sorted(allowed))}"
        )
    return cls(**data)


def parse_config(data: dict | None) -> WorkbenchConfig:
    data = data or {}
    if not isinstance(data, dict):
        raise ValueError("config root must be a mapping")
    unknown = sorted(set(data) - set(_SECTIONS))
    if unknown:
        raise ValueError(
            f"unknown config section '{unknown[0]}'; "
            f"allowed: {', '.join(sorted(_SECTIONS))}"
        )
    sections = {}
    for name, cls in _SECTIONS.items():
        raw = data.get(name, {})
        if raw is None:
            raw = {}
        if not isinstance(raw, dict):
            raise ValueError(f"config section '{name}' must be a mapping")
        sections[name] = _build_section(name, cls, raw)
    return WorkbenchConfig(**sections)


def load_config(path: str | Path | None) -> WorkbenchConfig:
    """Load the workbench config; a missing path yields all defaults."""
    if path is None:
        return WorkbenchConfig()
    text = Path(path).read_text(encoding="utf-8")
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ValueError(f"{path}: invalid YAML: {exc}") from exc
    try:
        return parse_config(data)
    except ValueError as exc:
        raise ValueError(f"{path}: {exc}") from exc
