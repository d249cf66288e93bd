"""Incident record types and their canonical line serialization.

Records travel as JSON Lines with fixed field names (id, title, description,
root_cause, comments, created_at, metadata). Serialization is canonical
(sorted keys, no extra whitespace variance) so accepted records round-trip
byte-identically.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

AUTHOR_ROLES = ("oce", "system", "customer", "unknown")


@dataclass
class DiscussionComment:
    author_role: str
    body: str
    created_at: str

    def __post_init__(self):
        if self.author_role not in AUTHOR_ROLES:
            raise ValueError(f"unknown author_role {self.author_role!r}")


@dataclass
class IncidentRecord:
    id: str
    title: str
    description: str = ""
    root_cause: str | None = None
    comments: list[DiscussionComment] = field(default_factory=list)
    created_at: str = ""
    metadata: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if not self.id:
            raise ValueError("incident id must be non-empty")
        stamps = [c.created_at for c in self.comments]
        if stamps != sorted(stamps):
            raise ValueError("comments must be ordered by timestamp ascending")


@dataclass
class SummarizedIncident:
    id: str
    title: str
    summary_description: str = ""
    summary_root_cause: str | None = None
    summary_discussion: str | None = None


@dataclass
class CorpusSplit:
    train: set[str] = field(default_factory=set)
    eval: set[str] = field(default_factory=set)
    test: set[str] = field(default_factory=set)

    def validate(self, corpus_ids: set[str]) -> None:
        """Splits must be pairwise disjoint and together cover the corpus."""
        if self.train & self.eval or self.train & self.test or self.eval & self.test:
            raise ValueError("splits must be pairwise disjoint")
        if self.train | self.eval | self.test != corpus_ids:
            raise ValueError("splits must cover exactly the corpus id set")


def record_to_line(record: IncidentRecord) -> str:
    payload = {
        "id": record.id,
        "title": record.title,
        "description": record.description,
        "root_cause": record.root_cause,
        "comments": [
            {"author_role": c.author_role, "body": c.body, "created_at": c.created_at}
            for c in record.comments
        ],
        "created_at": record.created_at,
        "metadata": record.metadata,
    }
    return json.dumps(payload, sort_keys=True, ensure_ascii=False)


def parse_record_line(line: str) -> IncidentRecord:
    """Parse one JSON line into a record; raises ValueError with the reason."""
    try:
        raw = json.loads(line)
    except json.JSONDecodeError as exc:
        raise ValueError(f"invalid JSON: {exc.msg}") from exc
    if not isinstance(raw, dict):
        raise ValueError("record must be a JSON object")
    if "id" not in raw:
        raise ValueError("missing field: id")
    root_cause = raw.get("root_cause")
    try:
        comments = [
            DiscussionComment(
                author_role=c.get("author_role", "unknown"),
                body=str(c.get("body", "")),
                created_at=str(c.get("created_at", "")),
            )
            for c in raw.get("comments", [])
        ]
        record = IncidentRecord(
            id=str(raw["id"]),
            title=str(raw.get("title", "")),
            description=str(raw.get("description") or ""),
            root_cause=None if root_cause is None else str(root_cause),
            comments=comments,
            created_at=str(raw.get("created_at", "")),
            metadata={str(k): str(v) for k, v in (raw.get("metadata") or {}).items()},
        )
    except (AttributeError, TypeError, ValueError) as exc:
        raise ValueError(str(exc) or type(exc).__name__) from exc
    return record


def summary_to_dict(summary: SummarizedIncident) -> dict:
    return {
        "id": summary.id,
        "title": summary.title,
        "summary_description": summary.summary_description,
        "summary_root_cause": summary.summary_root_cause,
        "summary_discussion": summary.summary_discussion,
    }


def summary_from_dict(raw: dict) -> SummarizedIncident:
    return SummarizedIncident(
        id=raw["id"],
        title=raw.get("title", ""),
        summary_description=raw.get("summary_description", ""),
        summary_root_cause=raw.get("summary_root_cause"),
        summary_discussion=raw.get("summary_discussion"),
    )
