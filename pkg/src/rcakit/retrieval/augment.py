"""Attach discussion summaries to retrieval hits without touching scores.

Augmentation is presentation-only: ids, ranks, and scores of the hits are
copied unchanged, so the ranking cannot shift.
"""

from __future__ import annotations

import dataclasses

from ..corpus.store import CorpusStore
from .base import RetrievalHit


def attach_discussions(
    hits: list[RetrievalHit], store: CorpusStore
) -> list[RetrievalHit]:
    summaries = store.summaries()
    out: list[RetrievalHit] = []
    for hit in hits:
        if hit.doc_id not in summaries:
            raise KeyError(f"no summary for document {hit.doc_id!r}")
        discussion = summaries[hit.doc_id].summary_discussion or ""
        out.append(dataclasses.replace(hit, augmented_discussion=discussion))
    return out
