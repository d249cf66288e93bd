"""Index construction, persistence, and the kind-dispatching search facade.

One index covers every train-split incident exactly once, built from the
summarized text (title plus summary). A built index is immutable; searches
share it freely across sessions.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from ..corpus.store import CorpusStore, config_hash
from .base import Embedder, HashingEmbedder, RetrievalHit
from .bm25 import SparseStats, search_sparse
from .dense import embed_or_raise, search_dense_mmr

INDEX_FORMAT_VERSION = 1


def document_text(title: str, summary_description: str) -> str:
    return f"{title}\n{summary_description}".strip()


class RetrievalIndex:
    """Immutable sparse or dense index over summarized incidents."""

    def __init__(
        self,
        kind: str,
        doc_ids: list[str],
        *,
        sparse_stats: SparseStats | None = None,
        vectors: list[np.ndarray] | None = None,
        embedder: Embedder | None = None,
        bm25_k1: float = 1.2,
        bm25_b: float = 0.75,
    ):
        if kind not in ("sparse", "dense"):
            raise ValueError(f"unknown index kind {kind!r}")
        if len(set(doc_ids)) != len(doc_ids):
            raise ValueError("doc_ids must be unique")
        self.kind = kind
        self.doc_ids = list(doc_ids)
        self.sparse_stats = sparse_stats
        self.vectors = vectors
        self.embedder = embedder
        self.bm25_k1 = bm25_k1
        self.bm25_b = bm25_b

    def search(self, query: str, k: int, *, mmr_lambda: float = 0.7) -> list[RetrievalHit]:
        if self.kind == "sparse":
            assert self.sparse_stats is not None
            return search_sparse(
                self.sparse_stats, query, k, k1=self.bm25_k1, b=self.bm25_b
            )
        assert self.vectors is not None
        if self.embedder is None:
            raise ValueError("dense search requires the build-time embedder")
        return search_dense_mmr(
            self.vectors, self.doc_ids, self.embedder, query, k, mmr_lambda
        )

    # -- persistence ------------------------------------------------------

    def save(self, directory: Path, name: str | None = None) -> Path:
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        name = name or self.kind
        payload: dict = {"doc_ids": self.doc_ids}
        if self.kind == "sparse":
            assert self.sparse_stats is not None
            payload["term_freqs"] = self.sparse_stats.term_freqs
            payload["doc_freqs"] = self.sparse_stats.doc_freqs
            payload["doc_lengths"] = self.sparse_stats.doc_lengths
        else:
            assert self.vectors is not None
            payload["vectors"] = [v.tolist() for v in self.vectors]
        data_path = directory / f"{name}.dat"
        data_path.write_text(json.dumps(payload), encoding="utf-8")
        manifest = {
            "version": INDEX_FORMAT_VERSION,
            "kind": self.kind,
            "doc_count": len(self.doc_ids),
            "bm25_k1": self.bm25_k1,
            "bm25_b": self.bm25_b,
            "corpus_hash": config_hash({"doc_ids": self.doc_ids}),
        }
        if self.kind == "dense":
            emb = self.embedder
            manifest["embedder"] = {
                "dim": getattr(emb, "dim", None),
                "seed": getattr(emb, "seed", None),
            }
        manifest_path = directory / f"{name}.manifest.json"
        manifest_path.write_text(
            json.dumps(manifest, indent=2, sort_keys=True), encoding="utf-8"
        )
        return manifest_path


def load_index(
    directory: Path, name: str, *, embedder: Embedder | None = None
) -> RetrievalIndex:
    directory = Path(directory)
    manifest = json.loads(
        (directory / f"{name}.manifest.json").read_text(encoding="utf-8")
    )
    if manifest["version"] != INDEX_FORMAT_VERSION:
        raise ValueError(f"unsupported index version {manifest['version']}")
    payload = json.loads((directory / f"{name}.dat").read_text(encoding="utf-8"))
    doc_ids = payload["doc_ids"]
    if manifest["kind"] == "sparse":
        stats = SparseStats(
            doc_ids=doc_ids,
            term_freqs=payload["term_freqs"],
            doc_freqs=payload["doc_freqs"],
            doc_lengths=payload["doc_lengths"],
        )
        return RetrievalIndex(
            "sparse",
            doc_ids,
            sparse_stats=stats,
            bm25_k1=manifest.get("bm25_k1", 1.2),
            bm25_b=manifest.get("bm25_b", 0.75),
        )
    if embedder is None:
        spec = manifest.get("embedder") or {}
        if spec.get("dim") is not None and spec.get("seed") is not None:
            embedder = HashingEmbedder(dim=spec["dim"], seed=spec["seed"])
    vectors = [np.asarray(v, dtype=np.float64) for v in payload["vectors"]]
    return RetrievalIndex("dense", doc_ids, vectors=vectors, embedder=embedder)


def build_index(
    store: CorpusStore,
    kind: str,
    *,
    embedder: Embedder | None = None,
    bm25_k1: float = 1.2,
    bm25_b: float = 0.75,
) -> RetrievalIndex:
    """Index the train split's summarized incidents."""
    if kind == "dense" and embedder is None:
        raise ValueError("dense index build requires an embedder")
    train_ids = sorted(store.split().train)
    summaries = store.summaries()
    doc_ids = [i for i in train_ids if i in summaries]
    texts = [
        document_text(summaries[i].title, summaries[i].summary_description)
        for i in doc_ids
    ]
    if kind == "sparse":
        stats = SparseStats.build(doc_ids, texts)
        return RetrievalIndex(
            "sparse", doc_ids, sparse_stats=stats, bm25_k1=bm25_k1, bm25_b=bm25_b
        )
    assert embedder is not None
    vectors = [embed_or_raise(embedder, text) for text in texts]
    return RetrievalIndex("dense", doc_ids, vectors=vectors, embedder=embedder)
