"""Ingest a tiny incident corpus, build both index kinds, and run queries.

Usage:
    python3 scripts/build_corpus_demo.py [workdir]

Writes everything under the given directory (default: a temp directory),
then prints sparse and dense search results for a sample query, with and
without discussion augmentation.
"""

from __future__ import annotations

import json
import sys
import tempfile
from pathlib import Path

from rcakit.corpus.ingest import ingest_incidents
from rcakit.corpus.records import SummarizedIncident
from rcakit.corpus.store import CorpusStore, assign_splits
from rcakit.retrieval.augment import attach_discussions
from rcakit.retrieval.base import HashingEmbedder
from rcakit.retrieval.index import build_index

SAMPLE_INCIDENTS = [
    {
        "id": "INC-101",
        "title": "blob upload errors after rollout",
        "description": "customers see 500s uploading blobs since the storage frontend rollout",
        "root_cause": "storage frontend rollout drifted a config flag",
        "comments": [
            {
                "author_role": "oce",
                "body": "rolled back frontend v2 on one scale unit; errors stopped",
                "created_at": "2024-03-01T10:00:00",
            }
        ],
    },
    {
        "id": "INC-102",
        "title": "login latency spikes",
        "description": "auth calls intermittently time out during peak hours",
        "root_cause": "token cache sized too small",
        "comments": [],
    },
    {
        "id": "INC-103",
        "title": "blob listing slow",
        "description": "listing blob containers is slow and occasionally errors",
        "root_cause": "metadata index fragmentation",
        "comments": [
            {
                "author_role": "oce",
                "body": "staging rebuild of the metadata index fixed the latency",
                "created_at": "2024-03-02T09:00:00",
            }
        ],
    },
    {
        "id": "INC-104",
        "title": "dns lookups failing",
        "description": "internal name lookups fail on a subset of nodes",
        "root_cause": "stale resolver configuration",
        "comments": [],
    },
]


def main() -> int:
    workdir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(tempfile.mkdtemp())
    workdir.mkdir(parents=True, exist_ok=True)
    raw = workdir / "incidents.jsonl"
    raw.write_text(
        "".join(json.dumps(r) + "\n" for r in SAMPLE_INCIDENTS), encoding="utf-8"
    )

    records, report = ingest_incidents(raw.read_text(encoding="utf-8").splitlines())
    store = CorpusStore.create(workdir / "corpus", records)
    store.write_splits(
        assign_splits(
            [r.id for r in records], eval_fraction=0.0, test_fraction=0.0, seed=13
        )
    )
    store.write_summaries(
        [
            SummarizedIncident(
                id=r.id,
                title=r.title,
                summary_description=r.description,
                summary_root_cause=r.root_cause,
                summary_discussion=(
                    "; ".join(c.body for c in r.comments) if r.comments else None
                ),
            )
            for r in records
        ]
    )
    print(
        f"ingested {report.accepted} record(s), rejected {report.rejected_count}, "
        f"into {workdir / 'corpus'}"
    )

    query = "blob errors during upload"
    print(f"\nquery: {query!r}")

    sparse = build_index(store, "sparse")
    print("\nsparse (keyword) ranking:")
    for hit in sparse.search(query, 3):
        print(f"  #{hit.rank} {hit.doc_id}  score={hit.score:.4f}")

    dense = build_index(store, "dense", embedder=HashingEmbedder())
    print("\ndense (diversified) ranking:")
    for hit in dense.search(query, 3):
        print(f"  #{hit.rank} {hit.doc_id}  score={hit.score:.4f}")

    print("\nwith discussion augmentation (ranking unchanged):")
    for hit in attach_discussions(dense.search(query, 3), store):
        discussion = hit.augmented_discussion or "(no discussion)"
        print(f"  #{hit.rank} {hit.doc_id}  {discussion}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
