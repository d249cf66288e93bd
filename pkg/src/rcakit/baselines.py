"""Non-agent baselines: retrieval-in-context, chain-of-thought, and
interleaved-retrieval chain-of-thought.

All three share one retrieval surface with the agent. RB and CoT issue a
single completion over the same k retrieved examples; IR-CoT alternates one
reasoning step with one retrieval round (each step's text is the next query)
until an answer sentinel appears or the unique-document budget is spent.
"""

from __future__ import annotations

from dataclasses import dataclass

from .agent.loop import classify_verdict
from .agent.types import RootCausePrediction
from .corpus.records import SummarizedIncident
from .corpus.store import CorpusStore
from .gateway.core import (
    ChatMessage,
    ChatRequest,
    ContextOverflowError,
    LlmSession,
)
from .retrieval.index import RetrievalIndex

COT_PREFIX = "Let's think step by step"
ANSWER_SENTINEL = "Final Answer:"

_SYSTEM = (
    "You are an experienced on-call engineer. Given a production incident and "
    "summaries of past incidents with their root causes, determine the most "
    "likely root cause of the current incident."
)


@dataclass
class BaselineConfig:
    mode: str = "rb"
    k: int = 10
    ircot_budget: int = 10
    retriever_kind: str = "sparse"
    per_round_k: int = 3
    mmr_lambda: float = 0.7

    def __post_init__(self) -> None:
        if self.mode not in ("rb", "cot", "ircot"):
            raise ValueError(f"unknown baseline mode {self.mode!r}")
        if self.k < 0:
            raise ValueError("k must be >= 0")
        if self.retriever_kind not in ("sparse", "dense"):
            raise ValueError(f"unknown retriever kind {self.retriever_kind!r}")
        if self.mode == "ircot" and self.ircot_budget < self.per_round_k:
            raise ValueError("ircot_budget must be >= the per-round k")


def _example_block(store: CorpusStore, doc_id: str, position: int) -> str:
    summary = store.get_summary(doc_id)
    return (
        f"Example {position}:\n"
        f"title: {summary.title}\n"
        f"summary: {summary.summary_description or '(none)'}\n"
        f"root cause: {summary.summary_root_cause or '(none recorded)'}"
    )


def retrieve_examples(
    incident: SummarizedIncident,
    k: int,
    index: RetrievalIndex,
    *,
    mmr_lambda: float = 0.7,
) -> list[str]:
    """Shared RB/CoT retrieval: top-k doc ids for the incident text."""
    if k == 0:
        return []
    query = f"{incident.title}\n{incident.summary_description}"
    hits = index.search(query, k, mmr_lambda=mmr_lambda)
    return [hit.doc_id for hit in hits]


def _render_request(
    incident: SummarizedIncident,
    store: CorpusStore,
    doc_ids: list[str],
    *,
    cot: bool,
) -> ChatRequest:
    # Most-relevant example rendered last, closest to the question.
    ordered = list(reversed(doc_ids))
    blocks = [
        _example_block(store, doc_id, i) for i, doc_id in enumerate(ordered, 1)
    ]
    parts = []
    if blocks:
        parts.append("Past incidents:\n\n" + "\n\n".join(blocks))
    parts.append(
        "Current incident:\n"
        f"title: {incident.title}\n"
        f"summary: {incident.summary_description or '(none)'}"
    )
    question = "What is the root cause of the current incident?"
    if cot:
        question += f" {COT_PREFIX}."
    parts.append(question)
    return ChatRequest(
        messages=[
            ChatMessage(role="system", content=_SYSTEM),
            ChatMessage(role="user", content="\n\n".join(parts)),
        ],
        max_tokens=1024,
    )


def _single_completion(
    incident: SummarizedIncident,
    store: CorpusStore,
    index: RetrievalIndex,
    session: LlmSession,
    config: BaselineConfig,
    *,
    cot: bool,
    tag: str,
) -> RootCausePrediction:
    doc_ids = retrieve_examples(incident, config.k, index, mmr_lambda=config.mmr_lambda)
    k_used = len(doc_ids)
    while True:
        request = _render_request(incident, store, doc_ids, cot=cot)
        try:
            result = session.complete(request)
            break
        except ContextOverflowError:
            # Drop the least-relevant example and retry with the largest
            # fitting k'; the reduction is recorded in the model tag.
            if not doc_ids:
                raise
            doc_ids = doc_ids[:-1]
    if len(doc_ids) != k_used:
        tag = f"{tag}(k-reduced-to-{len(doc_ids)})"
    answer = result.text.strip()
    if cot and ANSWER_SENTINEL in answer:
        answer = answer.split(ANSWER_SENTINEL, 1)[1].strip()
    return RootCausePrediction(
        incident_id=incident.id,
        predicted_root_cause=answer,
        verdict=classify_verdict(answer),
        model_tag=tag,
    )


def run_rb(
    incident: SummarizedIncident,
    store: CorpusStore,
    index: RetrievalIndex,
    session: LlmSession,
    config: BaselineConfig | None = None,
) -> RootCausePrediction:
    config = config or BaselineConfig(mode="rb")
    return _single_completion(
        incident, store, index, session, config, cot=False, tag=f"rb-k{config.k}"
    )


def run_cot(
    incident: SummarizedIncident,
    store: CorpusStore,
    index: RetrievalIndex,
    session: LlmSession,
    config: BaselineConfig | None = None,
) -> RootCausePrediction:
    config = config or BaselineConfig(mode="cot")
    return _single_completion(
        incident, store, index, session, config, cot=True, tag=f"cot-k{config.k}"
    )


@dataclass
class IrcotTrace:
    """Per-round record of the interleaved loop, for inspection and tests."""

    queries: list[str]
    doc_ids: list[str]  # unique, admission order
    completions: int


def run_ircot(
    incident: SummarizedIncident,
    store: CorpusStore,
    index: RetrievalIndex,
    session: LlmSession,
    config: BaselineConfig | None = None,
) -> tuple[RootCausePrediction, IrcotTrace]:
    config = config or BaselineConfig(mode="ircot")
    seen: list[str] = []
    seen_set: set[str] = set()
    reasoning: list[str] = []
    trace = IrcotTrace(queries=[], doc_ids=seen, completions=0)
    answer: str | None = None
    max_completions = config.ircot_budget + 1

    while trace.completions < max_completions:
        blocks = [_example_block(store, doc_id, i) for i, doc_id in enumerate(seen, 1)]
        context = ("Past incidents:\n\n" + "\n\n".join(blocks) + "\n\n") if blocks else ""
        user = (
            f"{context}Current incident:\n"
            f"title: {incident.title}\n"
            f"summary: {incident.summary_description or '(none)'}\n\n"
            f"{COT_PREFIX}, one step per reply. When the cause is clear, reply "
            f'with "{ANSWER_SENTINEL} <root cause>".\n'
        )
        if reasoning:
            user += "\nReasoning so far:\n" + "\n".join(reasoning) + "\n"
        request = ChatRequest(
            messages=[
                ChatMessage(role="system", content=_SYSTEM),
                ChatMessage(role="user", content=user),
            ],
            max_tokens=512,
        )
        step_text = session.complete(request).text.strip()
        trace.completions += 1
        if ANSWER_SENTINEL in step_text:
            answer = step_text.split(ANSWER_SENTINEL, 1)[1].strip()
            break
        reasoning.append(step_text)
        # The fresh reasoning step becomes the next retrieval query; once the
        # unique-document budget is full, no further documents are added.
        if len(seen_set) < config.ircot_budget:
            trace.queries.append(step_text)
            hits = index.search(
                step_text, config.per_round_k, mmr_lambda=config.mmr_lambda
            )
            for hit in hits:
                if hit.doc_id in seen_set:
                    continue
                if len(seen_set) >= config.ircot_budget:
                    break
                seen_set.add(hit.doc_id)
                seen.append(hit.doc_id)

    if answer is None:
        # Completion cap reached without the sentinel: force the answer from
        # the last reasoning step so a prediction is always produced.
        answer = reasoning[-1] if reasoning else ""
    prediction = RootCausePrediction(
        incident_id=incident.id,
        predicted_root_cause=answer,
        verdict=classify_verdict(answer),
        model_tag=f"ircot-b{config.ircot_budget}",
    )
    return prediction, trace
