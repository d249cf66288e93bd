"""On-disk corpus layout: raw store, summary store, and a manifest.

    <corpus_dir>/
        raw.jsonl        accepted records, canonical serialization
        summaries.jsonl  one SummarizedIncident per summarized record
        manifest.json    counts, config hash, split assignment

The built corpus is immutable in normal operation; readers never lock.
"""

from __future__ import annotations

import hashlib
import json
import random
from pathlib import Path

from .records import (
    CorpusSplit,
    IncidentRecord,
    SummarizedIncident,
    parse_record_line,
    record_to_line,
    summary_from_dict,
    summary_to_dict,
)

RAW_FILE = "raw.jsonl"
SUMMARY_FILE = "summaries.jsonl"
MANIFEST_FILE = "manifest.json"


def config_hash(payload: dict) -> str:
    blob = json.dumps(payload, sort_keys=True).encode("utf-8")
    return hashlib.sha256(blob).hexdigest()[:16]


class CorpusStore:
    def __init__(self, root: Path):
        self.root = Path(root)
        self._records: dict[str, IncidentRecord] | None = None
        self._summaries: dict[str, SummarizedIncident] | None = None

    # -- writing ---------------------------------------------------------

    @classmethod
    def create(
        cls,
        root: Path,
        records: list[IncidentRecord],
        *,
        manifest_extra: dict | None = None,
    ) -> "CorpusStore":
        root = Path(root)
        root.mkdir(parents=True, exist_ok=True)
        with (root / RAW_FILE).open("w", encoding="utf-8") as fh:
            for record in records:
                fh.write(record_to_line(record) + "\n")
        manifest = {
            "record_count": len(records),
            "config_hash": config_hash({"records": len(records)}),
            "splits": {"train": sorted(r.id for r in records), "eval": [], "test": []},
        }
        manifest.update(manifest_extra or {})
        (root / MANIFEST_FILE).write_text(
            json.dumps(manifest, indent=2, sort_keys=True), encoding="utf-8"
        )
        return cls(root)

    def write_summaries(self, summaries: list[SummarizedIncident]) -> None:
        with (self.root / SUMMARY_FILE).open("w", encoding="utf-8") as fh:
            for s in summaries:
                fh.write(json.dumps(summary_to_dict(s), sort_keys=True) + "\n")
        self._summaries = None

    def write_splits(self, split: CorpusSplit) -> None:
        split.validate(set(self.records()))
        manifest = self.manifest()
        manifest["splits"] = {
            "train": sorted(split.train),
            "eval": sorted(split.eval),
            "test": sorted(split.test),
        }
        (self.root / MANIFEST_FILE).write_text(
            json.dumps(manifest, indent=2, sort_keys=True), encoding="utf-8"
        )

    # -- reading ---------------------------------------------------------

    def manifest(self) -> dict:
        return json.loads((self.root / MANIFEST_FILE).read_text(encoding="utf-8"))

    def records(self) -> dict[str, IncidentRecord]:
        if self._records is None:
            self._records = {}
            path = self.root / RAW_FILE
            if path.exists():
                for line in path.read_text(encoding="utf-8").splitlines():
                    if line.strip():
                        record = parse_record_line(line)
                        self._records[record.id] = record
        return self._records

    def summaries(self) -> dict[str, SummarizedIncident]:
        if self._summaries is None:
            self._summaries = {}
            path = self.root / SUMMARY_FILE
            if path.exists():
                for line in path.read_text(encoding="utf-8").splitlines():
                    if line.strip():
                        summary = summary_from_dict(json.loads(line))
                        self._summaries[summary.id] = summary
        return self._summaries

    def split(self) -> CorpusSplit:
        raw = self.manifest().get("splits", {})
        return CorpusSplit(
            train=set(raw.get("train", [])),
            eval=set(raw.get("eval", [])),
            test=set(raw.get("test", [])),
        )

    def get_record(self, incident_id: str) -> IncidentRecord:
        try:
            return self.records()[incident_id]
        except KeyError:
            raise KeyError(f"unknown incident id {incident_id!r}") from None

    def get_summary(self, incident_id: str) -> SummarizedIncident:
        try:
            return self.summaries()[incident_id]
        except KeyError:
            raise KeyError(f"incident {incident_id!r} has no summary") from None


def assign_splits(
    ids: list[str], *, eval_fraction: float, test_fraction: float, seed: int = 0
) -> CorpusSplit:
    """Deterministic random split; everything not sampled stays in train."""
    if eval_fraction + test_fraction > 1.0:
        raise ValueError("eval_fraction + test_fraction must be <= 1")
    shuffled = sorted(ids)
    random.Random(seed).shuffle(shuffled)
    n_eval = int(len(shuffled) * eval_fraction)
    n_test = int(len(shuffled) * test_fraction)
    return CorpusSplit(
        eval=set(shuffled[:n_eval]),
        test=set(shuffled[n_eval : n_eval + n_test]),
        train=set(shuffled[n_eval + n_test :]),
    )
