"""Retrieval primitives shared by the sparse and dense paths."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Protocol

import numpy as np


@dataclass
class RetrievalConfig:
    k: int = 3
    total_budget: int = 10
    mmr_lambda: float = 0.7
    bm25_k1: float = 1.2
    bm25_b: float = 0.75

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.k > self.total_budget:
            raise ValueError("k must not exceed total_budget")
        if not 0.0 <= self.mmr_lambda <= 1.0:
            raise ValueError("mmr_lambda must be in [0, 1]")
        if self.bm25_k1 <= 0:
            raise ValueError("bm25_k1 must be positive")
        if not 0.0 <= self.bm25_b <= 1.0:
            raise ValueError("bm25_b must be in [0, 1]")


@dataclass
class RetrievalHit:
    doc_id: str
    score: float
    rank: int
    augmented_discussion: str | None = None


class EmbedderError(Exception):
    """Embedding provider failure; carries the text that failed."""


class Embedder(Protocol):
    dim: int

    def embed(self, text: str) -> np.ndarray: ...


@dataclass
class HashingEmbedder:
    """Deterministic test embedder: tokens hash to buckets, vector = counts.

    Same text always yields the same vector on every platform; empty text
    yields the zero vector. Texts whose token buckets are disjoint embed to
    exactly orthogonal vectors, which makes fixtures easy to author.
    """

    dim: int = 256
    seed: int = 13
    _bucket_cache: dict[str, int] = field(default_factory=dict, repr=False)

    def bucket(self, token: str) -> int:
        cached = self._bucket_cache.get(token)
        if cached is None:
            digest = hashlib.blake2b(
                f"{self.seed}:{token}".encode("utf-8"), digest_size=8
            ).digest()
            cached = int.from_bytes(digest, "big") % self.dim
            self._bucket_cache[token] = cached
        return cached

    def embed(self, text: str) -> np.ndarray:
        from ..text import tokenize

        vec = np.zeros(self.dim, dtype=np.float64)
        for token in tokenize(text):
            vec[self.bucket(token)] += 1.0
        return vec


def cosine(a: np.ndarray, b: np.ndarray) -> float:
    """Cosine similarity; defined as 0 when either vector is zero."""
    na = float(np.linalg.norm(a))
    nb = float(np.linalg.norm(b))
    if na == 0.0 or nb == 0.0:
        return 0.0
    return float(np.dot(a, b) / (na * nb))
