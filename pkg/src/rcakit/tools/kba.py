"""Knowledge-base article tools: question answering and plan distillation.

Articles are chunked on a token budget with overlap and embedded into an
in-memory vector store. An incident with a pinned article bypasses the store
entirely — its retrieval counter must stay at zero for the whole episode.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..gateway.core import ChatMessage, ChatRequest, LlmSession
from ..retrieval.base import Embedder, cosine
from ..retrieval.dense import embed_or_raise
from ..text import split_token_chunks_overlap
from .base import Tool, ToolContext, ToolDescriptor

NO_KBA_MESSAGE = "no KBA available"

_QA_SYSTEM = (
    "You answer questions strictly from the provided knowledge base content. "
    "If the answer is not in the content, say it is not covered by the "
    "knowledge base."
)
_PLAN_SYSTEM = (
    "You write numbered troubleshooting plans grounded strictly in the "
    "provided knowledge base content. Reply with a numbered list of high-level "
    "steps, one per line."
)


@dataclass(frozen=True)
class KBADocument:
    id: str
    title: str
    body: str
    linked_incident_types: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if not self.body.strip():
            raise ValueError("KBA body must be non-empty")


@dataclass(frozen=True)
class KbaChunk:
    doc_id: str
    doc_title: str
    position: int
    text: str


@dataclass
class KbaStore:
    """Chunked, embedded knowledge base articles with a retrieval counter."""

    documents: dict[str, KBADocument]
    chunks: list[KbaChunk]
    vectors: list[np.ndarray]
    embedder: Embedder
    retrieval_count: int = field(default=0)

    @classmethod
    def build(
        cls,
        documents: list[KBADocument],
        embedder: Embedder,
        *,
        chunk_budget: int = 64,
        overlap: int = 16,
    ) -> "KbaStore":
        by_id: dict[str, KBADocument] = {}
        for doc in documents:
            if doc.id in by_id:
                raise ValueError(f"duplicate KBA id {doc.id!r}")
            by_id[doc.id] = doc
        chunks: list[KbaChunk] = []
        for doc in documents:
            text = f"{doc.title}\n{doc.body}"
            for position, piece in enumerate(
                split_token_chunks_overlap(text, chunk_budget, overlap)
            ):
                chunks.append(KbaChunk(doc.id, doc.title, position, piece))
        vectors = [embed_or_raise(embedder, chunk.text) for chunk in chunks]
        return cls(
            documents=by_id, chunks=chunks, vectors=vectors, embedder=embedder
        )

    @property
    def empty(self) -> bool:
        return not self.chunks

    def top_chunks(self, query: str, k: int) -> list[tuple[KbaChunk, float]]:
        """Most similar chunks by cosine; every call bumps the counter."""
        self.retrieval_count += 1
        if self.empty or k < 1:
            return []
        query_vec = embed_or_raise(self.embedder, query)
        scored = [
            (chunk, cosine(query_vec, vec))
            for chunk, vec in zip(self.chunks, self.vectors)
        ]
        scored.sort(key=lambda item: (-item[1], item[0].doc_id, item[0].position))
        return scored[:k]


def _ask(session: LlmSession, system: str, user: str, max_tokens: int = 512) -> str:
    request = ChatRequest(
        messages=[
            ChatMessage(role="system", content=system),
            ChatMessage(role="user", content=user),
        ],
        max_tokens=max_tokens,
    )
    return session.complete(request).text.strip()


def _utility(ctx: ToolContext) -> LlmSession:
    if ctx.utility is None:
        raise ValueError("utility model unavailable")
    return ctx.utility


def _kba_context(ctx: ToolContext, query: str) -> str | None:
    """KBA text for a query: the pinned article, or retrieved chunks."""
    if ctx.pinned_kba is not None:
        return f"{ctx.pinned_kba.title}\n{ctx.pinned_kba.body}"
    if ctx.kba_store is None or ctx.kba_store.empty:
        return None
    picked = ctx.kba_store.top_chunks(query, ctx.retrieval_k)
    blocks = [
        f"[{i}] from {chunk.doc_title}:\n{chunk.text}"
        for i, (chunk, _score) in enumerate(picked, 1)
    ]
    return "\n\n".join(blocks)


def _kba_qa(action_input: str, ctx: ToolContext) -> str:
    question = action_input.strip()
    if not question:
        return "provide a question for the knowledge base"
    content = _kba_context(ctx, question)
    if content is None:
        return NO_KBA_MESSAGE
    return _ask(
        _utility(ctx),
        _QA_SYSTEM,
        f"Knowledge base content:\n{content}\n\nQuestion: {question}",
    )


kba_qa_tool = Tool(
    descriptor=ToolDescriptor(
        name="kba_qa",
        description=(
            "Ask a question over internal knowledge base articles (environment "
            "facts, cluster addresses, sample queries, procedures)."
        ),
        input_schema={"question": "text"},
        retrieval_bearing=False,
    ),
    fn=_kba_qa,
)


def _kba_plan(action_input: str, ctx: ToolContext) -> str:
    focus = action_input.strip()
    query = f"{ctx.incident.title}\n{ctx.incident.summary_description}"
    if focus:
        query = f"{query}\n{focus}"
    content = _kba_context(ctx, query)
    if content is None:
        return f"{NO_KBA_MESSAGE}; a troubleshooting plan cannot be formed"
    user = (
        f"Knowledge base content:\n{content}\n\n"
        f"Incident: {ctx.incident.title}\n"
        f"{ctx.incident.summary_description}\n\n"
        "Write a numbered high-level troubleshooting plan for this incident."
    )
    if focus:
        user += f"\nFocus: {focus}"
    return _ask(_utility(ctx), _PLAN_SYSTEM, user)


kba_plan_tool = Tool(
    descriptor=ToolDescriptor(
        name="kba_plan",
        description=(
            "Produce a numbered high-level troubleshooting plan for the current "
            "incident, distilled from internal knowledge base articles."
        ),
        input_schema={"focus": "text (optional)"},
        retrieval_bearing=False,
    ),
    fn=_kba_plan,
)
