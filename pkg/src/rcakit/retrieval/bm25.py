"""BM25 scoring over tokenized incident summaries.

Score of document d for query q:

    score(q, d) = sum over unique query terms t of
                  idf(t) * tf(t, d) * (k1 + 1) / (tf(t, d) + k1 * norm(d))

    idf(t)  = ln(1 + (N - df(t) + 0.5) / (df(t) + 0.5))
    norm(d) = 1 - b + b * |d| / avgdl

The idf variant is the non-negative one, so a document scores above zero
exactly when it contains at least one query term; zero-score documents are
never returned. Ties break by doc_id ascending.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..text import tokenize
from .base import RetrievalHit


@dataclass
class SparseStats:
    doc_ids: list[str]
    term_freqs: list[dict[str, int]]  # aligned with doc_ids
    doc_freqs: dict[str, int]
    doc_lengths: list[int]

    @classmethod
    def build(cls, doc_ids: list[str], texts: list[str]) -> "SparseStats":
        term_freqs: list[dict[str, int]] = []
        doc_freqs: dict[str, int] = {}
        doc_lengths: list[int] = []
        for text in texts:
            tokens = tokenize(text)
            freqs: dict[str, int] = {}
            for token in tokens:
                freqs[token] = freqs.get(token, 0) + 1
            for term in freqs:
                doc_freqs[term] = doc_freqs.get(term, 0) + 1
            term_freqs.append(freqs)
            doc_lengths.append(len(tokens))
        return cls(list(doc_ids), term_freqs, doc_freqs, doc_lengths)

    @property
    def avg_doc_length(self) -> float:
        if not self.doc_lengths:
            return 0.0
        return sum(self.doc_lengths) / len(self.doc_lengths)


def bm25_score(
    stats: SparseStats, doc_index: int, query_terms: list[str], k1: float, b: float
) -> float:
    n_docs = len(stats.doc_ids)
    avgdl = stats.avg_doc_length
    if n_docs == 0 or avgdl == 0.0:
        return 0.0
    freqs = stats.term_freqs[doc_index]
    norm = 1.0 - b + b * stats.doc_lengths[doc_index] / avgdl
    score = 0.0
    for term in dict.fromkeys(query_terms):  # unique, order preserved
        tf = freqs.get(term, 0)
        if tf == 0:
            continue
        df = stats.doc_freqs.get(term, 0)
        idf = math.log(1.0 + (n_docs - df + 0.5) / (df + 0.5))
        score += idf * tf * (k1 + 1.0) / (tf + k1 * norm)
    return score


def search_sparse(
    stats: SparseStats, query: str, k: int, *, k1: float = 1.2, b: float = 0.75
) -> list[RetrievalHit]:
    """Top-k documents by BM25, descending; zero-score documents excluded."""
    query_terms = tokenize(query)
    if not query_terms:
        return []
    scored = []
    for i, doc_id in enumerate(stats.doc_ids):
        score = bm25_score(stats, i, query_terms, k1, b)
        if score > 0.0:
            scored.append((doc_id, score))
    scored.sort(key=lambda pair: (-pair[1], pair[0]))
    return [
        RetrievalHit(doc_id=doc_id, score=score, rank=rank)
        for rank, (doc_id, score) in enumerate(scored[:k], start=1)
    ]
