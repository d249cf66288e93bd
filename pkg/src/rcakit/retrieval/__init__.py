from .augment import attach_discussions
from .base import (
    EmbedderError,
    HashingEmbedder,
    RetrievalConfig,
    RetrievalHit,
    cosine,
)
from .bm25 import bm25_score, search_sparse
from .dense import mmr_select, search_dense_mmr
from .index import RetrievalIndex, build_index, load_index

__all__ = [
    "EmbedderError",
    "HashingEmbedder",
    "RetrievalConfig",
    "RetrievalHit",
    "RetrievalIndex",
    "attach_discussions",
    "bm25_score",
    "build_index",
    "cosine",
    "load_index",
    "mmr_select",
    "search_dense_mmr",
    "search_sparse",
]
