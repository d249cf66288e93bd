"""Incident and discussion summarization over a utility LLM session.

Descriptions and root causes get one summarization call each; discussions are
chunked (greedily by whole comments), each chunk summarized, and multi-chunk
results recombined with one final pass. Comment filtering drops entries below
a token threshold before any chunking happens.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..gateway import ChatMessage, ChatRequest, GatewayError, LlmSession
from ..text import count_tokens, split_token_chunks, truncate_tokens
from .records import DiscussionComment, IncidentRecord, SummarizedIncident

DEFAULT_DESCRIPTION_PROMPT = (
    "Summarize the following incident {kind} in at most {budget} words. "
    "Keep error messages, component names, and symptoms verbatim where possible.\n\n"
    "{text}"
)
DEFAULT_RECOMBINE_PROMPT = (
    "The following are summaries of consecutive parts of one incident "
    "discussion. Combine them into a single summary of at most {budget} words, "
    "preserving the order of diagnostic steps.\n\n{text}"
)


class SummarizationError(Exception):
    def __init__(self, message: str, partial: SummarizedIncident | None = None):
        super().__init__(message)
        self.partial = partial


@dataclass
class SummarizerConfig:
    summary_budget: int = 128
    chunk_budget: int = 256
    min_comment_tokens: int = 8
    description_prompt: str = DEFAULT_DESCRIPTION_PROMPT
    recombine_prompt: str = DEFAULT_RECOMBINE_PROMPT
    max_tokens: int = 512


def filter_comments(
    comments: list[DiscussionComment], min_tokens: int
) -> list[DiscussionComment]:
    """Drop comments with fewer than `min_tokens` tokens; order preserved."""
    if min_tokens < 0:
        raise ValueError("min_tokens must be >= 0")
    return [c for c in comments if count_tokens(c.body) >= min_tokens]


def render_comment(comment: DiscussionComment) -> str:
    return f"[{comment.author_role}] {comment.body}"


def chunk_comments(comments: list[DiscussionComment], chunk_budget: int) -> list[str]:
    """Greedy whole-comment chunking; a lone oversized comment is split.

    Every returned chunk has at most `chunk_budget` tokens.
    """
    if chunk_budget <= 0:
        raise ValueError("chunk_budget must be positive")
    chunks: list[str] = []
    current: list[str] = []
    current_tokens = 0
    for comment in comments:
        rendered = render_comment(comment)
        size = count_tokens(rendered)
        if size > chunk_budget:
            if current:
                chunks.append("\n".join(current))
                current, current_tokens = [], 0
            chunks.extend(split_token_chunks(rendered, chunk_budget))
            continue
        if current and current_tokens + size > chunk_budget:
            chunks.append("\n".join(current))
            current, current_tokens = [], 0
        current.append(rendered)
        current_tokens += size
    if current:
        chunks.append("\n".join(current))
    return chunks


class Summarizer:
    def __init__(self, session: LlmSession, config: SummarizerConfig | None = None):
        self.session = session
        self.config = config or SummarizerConfig()

    def _complete(self, prompt: str) -> str:
        request = ChatRequest(
            messages=[ChatMessage("user", prompt)],
            max_tokens=self.config.max_tokens,
        )
        return self.session.complete(request).text.strip()

    def _summarize_field(self, text: str, kind: str) -> str:
        prompt = self.config.description_prompt.format(
            kind=kind, budget=self.config.summary_budget, text=text
        )
        return truncate_tokens(self._complete(prompt), self.config.summary_budget)

    def summarize_incident(self, incident: IncidentRecord) -> SummarizedIncident:
        """Summarize description and root cause; empty fields cost no calls."""
        summary = SummarizedIncident(id=incident.id, title=incident.title)
        try:
            if incident.description.strip():
                summary.summary_description = self._summarize_field(
                    incident.description, "description"
                )
            if incident.root_cause and incident.root_cause.strip():
                summary.summary_root_cause = self._summarize_field(
                    incident.root_cause, "root cause"
                )
        except GatewayError as exc:
            raise SummarizationError(str(exc), partial=summary) from exc
        return summary

    def summarize_discussion(self, comments: list[DiscussionComment]) -> str:
        """Chunk, summarize each chunk, recombine once when multi-chunk.

        Backend call count is chunk_count, plus one when chunk_count > 1.
        """
        chunks = chunk_comments(comments, self.config.chunk_budget)
        if not chunks:
            return ""
        parts: list[str] = []
        for i, chunk in enumerate(chunks):
            try:
                parts.append(self._summarize_field(chunk, "discussion"))
            except GatewayError as exc:
                raise SummarizationError(f"chunk {i}: {exc}") from exc
        if len(parts) == 1:
            return parts[0]
        prompt = self.config.recombine_prompt.format(
            budget=self.config.summary_budget, text="\n\n".join(parts)
        )
        try:
            combined = self._complete(prompt)
        except GatewayError as exc:
            raise SummarizationError(f"recombine: {exc}") from exc
        return truncate_tokens(combined, self.config.summary_budget)
