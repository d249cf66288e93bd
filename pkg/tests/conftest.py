"""Shared fixtures. Every test runs with outbound networking disabled so the
whole suite is provably offline: socket connects raise immediately."""

from __future__ import annotations

import socket

import pytest
from hypothesis import HealthCheck, settings

from rcakit.corpus.records import (
    CorpusSplit,
    DiscussionComment,
    IncidentRecord,
    SummarizedIncident,
)
from rcakit.corpus.store import CorpusStore

settings.register_profile(
    "ci",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("ci")


@pytest.fixture(autouse=True)
def no_network(monkeypatch):
    def blocked(self, address, *args, **kwargs):
        raise RuntimeError(f"network access blocked in tests (connect to {address!r})")

    monkeypatch.setattr(socket.socket, "connect", blocked)
    monkeypatch.setattr(socket.socket, "connect_ex", blocked)
    yield


INCIDENT_FIXTURES = [
    ("INC-1", "blob upload errors", "customers see blob error codes on upload",
     "storage frontend rollout drifted", "checked logs; rollout v2 suspect"),
    ("INC-2", "login latency", "auth calls time out intermittently",
     "token cache misconfigured", None),
    ("INC-3", "blob listing slow", "listing blob containers shows error spikes",
     "metadata index fragmentation", "index rebuild fixed staging"),
    ("INC-4", "node reboot storm", "agent nodes reboot in a loop",
     "bad kernel patch", None),
    ("INC-5", "dns failures", "lookups fail for internal names",
     "stale resolver config", "resolver cache flushed"),
]


def build_corpus(root) -> CorpusStore:
    """Five-incident corpus, everything in the train split, with summaries."""
    records = []
    summaries = []
    for incident_id, title, desc, cause, discussion in INCIDENT_FIXTURES:
        comments = []
        if discussion:
            comments = [
                DiscussionComment(
                    author_role="oce", body=discussion, created_at="2024-01-01T00:00:00"
                )
            ]
        records.append(
            IncidentRecord(
                id=incident_id,
                title=title,
                description=desc,
                root_cause=cause,
                comments=comments,
            )
        )
        summaries.append(
            SummarizedIncident(
                id=incident_id,
                title=title,
                summary_description=desc,
                summary_root_cause=cause,
                summary_discussion=discussion,
            )
        )
    store = CorpusStore.create(root, records)
    store.write_splits(
        CorpusSplit(train={r.id for r in records}, eval=set(), test=set())
    )
    store.write_summaries(summaries)
    return store


@pytest.fixture
def store(tmp_path) -> CorpusStore:
    return build_corpus(tmp_path / "corpus")
