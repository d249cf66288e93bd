"""Dense retrieval: cosine relevance with greedy max-marginal-relevance picks.

The first pick is the most query-similar document. Every later pick maximizes

    lambda * sim(query, d) - (1 - lambda) * max over selected s of sim(d, s)

with cosine similarity on both terms. All ties break by doc_id ascending, so
results are fully deterministic.
"""

from __future__ import annotations

import numpy as np

from .base import Embedder, EmbedderError, RetrievalHit, cosine


def embed_or_raise(embedder: Embedder, text: str) -> np.ndarray:
    try:
        return embedder.embed(text)
    except Exception as exc:
        preview = text if len(text) <= 80 else text[:77] + "..."
        raise EmbedderError(f"embedding failed for {preview!r}: {exc}") from exc


def mmr_select(
    query_vec: np.ndarray,
    doc_vecs: list[np.ndarray],
    doc_ids: list[str],
    k: int,
    mmr_lambda: float,
) -> list[tuple[str, float]]:
    """Greedy MMR over all candidates; returns (doc_id, pick score) in order."""
    n = len(doc_ids)
    if n == 0 or k <= 0:
        return []
    relevance = [cosine(query_vec, v) for v in doc_vecs]
    remaining = list(range(n))
    selected: list[int] = []
    picks: list[tuple[str, float]] = []
    while remaining and len(selected) < k:
        if not selected:
            best = min(remaining, key=lambda i: (-relevance[i], doc_ids[i]))
            best_score = relevance[best]
        else:

            def objective(i: int) -> float:
                redundancy = max(cosine(doc_vecs[i], doc_vecs[j]) for j in selected)
                return mmr_lambda * relevance[i] - (1.0 - mmr_lambda) * redundancy

            best = min(remaining, key=lambda i: (-objective(i), doc_ids[i]))
            best_score = objective(best)
        selected.append(best)
        remaining.remove(best)
        picks.append((doc_ids[best], best_score))
    return picks


def search_dense_mmr(
    doc_vecs: list[np.ndarray],
    doc_ids: list[str],
    embedder: Embedder,
    query: str,
    k: int,
    mmr_lambda: float,
) -> list[RetrievalHit]:
    query_vec = embed_or_raise(embedder, query)
    picks = mmr_select(query_vec, doc_vecs, doc_ids, k, mmr_lambda)
    return [
        RetrievalHit(doc_id=doc_id, score=score, rank=rank)
        for rank, (doc_id, score) in enumerate(picks, start=1)
    ]
