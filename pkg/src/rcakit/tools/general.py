"""General investigation tools: incident Q/A and historical-incident retrieval.

Two retrieval styles are provided. The broad tool embeds the incident context
plus the planner's query and returns full summary blocks in one shot; the
search + Q/A pair first stores matching ids in session scratch, then answers
questions over that retrieved set.
"""

from __future__ import annotations

from ..corpus.store import CorpusStore
from ..gateway.core import ChatMessage, ChatRequest, LlmSession
from ..retrieval.augment import attach_discussions
from ..retrieval.base import RetrievalHit
from ..text import count_tokens, split_token_chunks, truncate_tokens
from .base import Tool, ToolContext, ToolDescriptor

NOT_FOUND_PHRASE = "not found in the incident details"
SEARCH_SCRATCH_KEY = "search_ids"

_QA_SYSTEM = (
    "You answer questions strictly from the provided text. If the answer is "
    f"not in the text, reply that it is {NOT_FOUND_PHRASE}."
)


def _utility(ctx: ToolContext) -> LlmSession:
    if ctx.utility is None:
        raise ValueError("utility model unavailable")
    return ctx.utility


def _store(ctx: ToolContext) -> CorpusStore:
    if ctx.store is None:
        raise ValueError("historical corpus unavailable")
    return ctx.store


def _ask(session: LlmSession, system: str, user: str, max_tokens: int = 256) -> str:
    request = ChatRequest(
        messages=[
            ChatMessage(role="system", content=system),
            ChatMessage(role="user", content=user),
        ],
        max_tokens=max_tokens,
    )
    return session.complete(request).text.strip()


def grounded_answer(
    session: LlmSession, context_text: str, question: str, chunk_budget: int
) -> str:
    """Answer a question over text, chunking when it exceeds the budget.

    Makes one call per chunk plus one recombination call when the text was
    split; a single chunk is answered directly.
    """
    chunks = (
        split_token_chunks(context_text, chunk_budget)
        if count_tokens(context_text) > chunk_budget
        else [context_text]
    )
    answers = [
        _ask(session, _QA_SYSTEM, f"Text:\n{chunk}\n\nQuestion: {question}")
        for chunk in chunks
    ]
    if len(answers) == 1:
        return answers[0]
    partials = "\n".join(f"- {a}" for a in answers)
    return _ask(
        session,
        _QA_SYSTEM,
        "Partial answers from consecutive sections of the text:\n"
        f"{partials}\n\nQuestion: {question}\n\n"
        "Combine the partial answers into one final answer, ignoring sections "
        "where the information was not found unless none of them found it.",
    )


def _admit_hits(
    ctx: ToolContext, hits: list[RetrievalHit]
) -> tuple[list[RetrievalHit], str]:
    """Charge hits against the episode budget; returns (kept hits, note)."""
    if ctx.dedup_retrieval:
        hits = [h for h in hits if h.doc_id not in ctx.ledger.seen]
    admitted, dropped = ctx.ledger.admit([h.doc_id for h in hits])
    kept = [h for h in hits if h.doc_id in set(admitted)]
    note = ""
    if dropped:
        note = (
            f"\n(retrieval budget of {ctx.ledger.total_budget} unique documents "
            f"exhausted: {len(dropped)} document(s) withheld; work with the "
            "evidence already gathered)"
        )
    return kept, note


def _doc_block(ctx: ToolContext, hit: RetrievalHit, position: int) -> str:
    summary = _store(ctx).get_summary(hit.doc_id)
    lines = [
        f"[{position}] id={summary.id} title={summary.title}",
        f"    summary: {summary.summary_description or '(none)'}",
        f"    root cause: {summary.summary_root_cause or '(none recorded)'}",
    ]
    if ctx.include_discussions:
        lines.append(f"    discussion: {hit.augmented_discussion or '(none)'}")
    return "\n".join(lines)


# -- incident details -------------------------------------------------------


def _incident_details_qa(action_input: str, ctx: ToolContext) -> str:
    question = action_input.strip()
    if not question:
        return "provide a question about the incident"
    raw = ctx.raw_incident
    if raw is None:
        return "no incident details available"
    if not raw.description.strip():
        return "no description available"
    text = f"{raw.title}\n\n{raw.description}"
    return grounded_answer(_utility(ctx), text, question, ctx.qa_chunk_budget)


incident_details_qa_tool = Tool(
    descriptor=ToolDescriptor(
        name="incident_details_qa",
        description=(
            "Ask a question about the current incident's full report text; "
            "answers are grounded in that text only."
        ),
        input_schema={"question": "text"},
    ),
    fn=_incident_details_qa,
)


# -- broad retrieval --------------------------------------------------------


def _historical_incidents_br(action_input: str, ctx: ToolContext) -> str:
    if ctx.dense_index is None:
        raise ValueError("dense historical index unavailable")
    agent_query = action_input.strip()
    title = ctx.incident.title
    summary = ctx.incident.summary_description
    budget = ctx.query_token_budget
    fixed = count_tokens(title) + count_tokens(agent_query)
    truncated = False
    if fixed + count_tokens(summary) > budget:
        summary = truncate_tokens(summary, max(0, budget - fixed))
        truncated = True
    query = "\n".join(part for part in (title, summary, agent_query) if part)
    hits = ctx.dense_index.search(query, ctx.retrieval_k, mmr_lambda=ctx.mmr_lambda)
    if ctx.include_discussions:
        hits = attach_discussions(hits, _store(ctx))
    kept, note = _admit_hits(ctx, hits)
    if not kept:
        return "no historical incidents retrieved" + note
    blocks = [_doc_block(ctx, hit, i) for i, hit in enumerate(kept, 1)]
    header = f"retrieved {len(kept)} historical incident(s):"
    if truncated:
        header += " (incident summary truncated to fit the retrieval query budget)"
    return "\n".join([header, *blocks]) + note


historical_incidents_br_tool = Tool(
    descriptor=ToolDescriptor(
        name="historical_incidents",
        description=(
            "Retrieve similar historical incidents using the current incident's "
            "context plus your query text; returns their summaries and root causes."
        ),
        input_schema={"query": "text"},
        retrieval_bearing=True,
    ),
    fn=_historical_incidents_br,
)


# -- search + Q/A -----------------------------------------------------------


def _search_index(ctx: ToolContext):
    index = ctx.sparse_index if ctx.search_kind == "sparse" else ctx.dense_index
    if index is None:
        raise ValueError(f"{ctx.search_kind} historical index unavailable")
    return index


def _historical_incidents_search(action_input: str, ctx: ToolContext) -> str:
    query = action_input.strip()
    hits = _search_index(ctx).search(query, ctx.retrieval_k, mmr_lambda=ctx.mmr_lambda)
    kept, note = _admit_hits(ctx, hits)
    ctx.scratch[SEARCH_SCRATCH_KEY] = [h.doc_id for h in kept]
    if not kept:
        return "no incidents found" + note
    store = _store(ctx)
    lines = [f"found {len(kept)} incident(s):"]
    for i, hit in enumerate(kept, 1):
        lines.append(f"[{i}] {hit.doc_id}: {store.get_summary(hit.doc_id).title}")
    return "\n".join(lines) + note


historical_incidents_search_tool = Tool(
    descriptor=ToolDescriptor(
        name="historical_incidents_search",
        description=(
            "Search historical incidents with a keyword query; returns matching "
            "incident titles and stores the result set for follow-up questions."
        ),
        input_schema={"query": "text"},
        retrieval_bearing=True,
    ),
    fn=_historical_incidents_search,
)


def _historical_incidents_qa(action_input: str, ctx: ToolContext) -> str:
    question = action_input.strip()
    doc_ids = ctx.scratch.get(SEARCH_SCRATCH_KEY)
    if not doc_ids:
        return (
            "no retrieved incidents to answer over; run "
            "historical_incidents_search first, then ask again"
        )
    store = _store(ctx)
    blocks = []
    for doc_id in doc_ids:
        summary = store.get_summary(doc_id)
        block = (
            f"incident {summary.id}: {summary.title}\n"
            f"summary: {summary.summary_description or '(none)'}\n"
            f"root cause: {summary.summary_root_cause or '(none recorded)'}"
        )
        if ctx.include_discussions:
            block += f"\ndiscussion: {summary.summary_discussion or '(none)'}"
        blocks.append(block)
    context_text = "\n\n".join(blocks)
    return grounded_answer(_utility(ctx), context_text, question, ctx.qa_chunk_budget)


historical_incidents_qa_tool = Tool(
    descriptor=ToolDescriptor(
        name="historical_incidents_qa",
        description=(
            "Ask a question over the incidents returned by your most recent "
            "incident search."
        ),
        input_schema={"question": "text"},
    ),
    fn=_historical_incidents_qa,
)
