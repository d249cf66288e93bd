"""Tool plumbing: descriptors, the registry, and per-episode context.

A tool is a named callable ``fn(action_input, context) -> observation text``.
Tools are stateless between calls except for the session-scoped scratch
(search results, table handles) carried by the ToolContext.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Callable, Iterator, Protocol, Sequence

from ..agent.budget import RetrievalLedger

if TYPE_CHECKING:  # pragma: no cover - typing only
    from ..corpus.records import IncidentRecord, SummarizedIncident
    from ..corpus.store import CorpusStore
    from ..gateway.core import LlmSession
    from ..retrieval.index import RetrievalIndex
    from .human import HumanChannel
    from .kba import KBADocument, KbaStore


@dataclass(frozen=True)
class TableResult:
    """A materialized query result: column names plus value rows."""

    columns: tuple[str, ...]
    rows: tuple[tuple, ...]

    def __post_init__(self) -> None:
        if len(set(self.columns)) != len(self.columns):
            raise ValueError("column names must be unique")
        for row in self.rows:
            if len(row) != len(self.columns):
                raise ValueError("row width must match column count")


class DatabaseAdapter(Protocol):
    """Pluggable (cluster, database, query) → rows interface."""

    def execute(self, cluster: str, database: str, query: str) -> TableResult: ...


@dataclass(frozen=True)
class ToolDescriptor:
    name: str
    description: str
    input_schema: dict[str, str] = field(default_factory=dict)
    retrieval_bearing: bool = False

    def __post_init__(self) -> None:
        if not self.name:
            raise ValueError("tool name must be non-empty")


ToolFn = Callable[[str, "ToolContext"], str]


@dataclass(frozen=True)
class Tool:
    descriptor: ToolDescriptor
    fn: ToolFn

    @property
    def name(self) -> str:
        return self.descriptor.name

    def __call__(self, action_input: str, context: "ToolContext") -> str:
        return self.fn(action_input, context)


class Toolset:
    """An ordered registry of uniquely named tools."""

    def __init__(self, tools: Sequence[Tool]):
        self._tools: dict[str, Tool] = {}
        for tool in tools:
            if tool.name in self._tools:
                raise ValueError(f"duplicate tool name {tool.name!r}")
            self._tools[tool.name] = tool

    def names(self) -> list[str]:
        return list(self._tools)

    def get(self, name: str) -> Tool | None:
        return self._tools.get(name)

    def descriptors(self) -> list[ToolDescriptor]:
        return [tool.descriptor for tool in self._tools.values()]

    def __len__(self) -> int:
        return len(self._tools)

    def __iter__(self) -> Iterator[Tool]:
        return iter(self._tools.values())


@dataclass
class ToolContext:
    """Everything one episode's tools may touch. Never shared across sessions."""

    incident: "SummarizedIncident"
    raw_incident: "IncidentRecord | None" = None
    utility: "LlmSession | None" = None
    ledger: RetrievalLedger = field(default_factory=lambda: RetrievalLedger(10))
    store: "CorpusStore | None" = None
    dense_index: "RetrievalIndex | None" = None
    sparse_index: "RetrievalIndex | None" = None
    database: DatabaseAdapter | None = None
    kba_store: "KbaStore | None" = None
    pinned_kba: "KBADocument | None" = None
    human: "HumanChannel | None" = None
    human_timeout: float = 30.0
    include_discussions: bool = False
    dedup_retrieval: bool = False
    retrieval_k: int = 3
    mmr_lambda: float = 0.7
    search_kind: str = "sparse"
    qa_chunk_budget: int = 1024
    query_token_budget: int = 512
    scratch: dict = field(default_factory=dict)
