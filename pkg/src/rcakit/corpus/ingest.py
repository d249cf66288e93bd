"""Line-delimited incident ingestion with per-line accept/reject accounting."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .records import IncidentRecord, parse_record_line


@dataclass
class IngestReport:
    accepted: int = 0
    rejected: list[tuple[int, str]] = field(default_factory=list)  # (line no, reason)

    @property
    def rejected_count(self) -> int:
        return len(self.rejected)


def ingest_incidents(
    lines: Iterable[str],
) -> tuple[list[IncidentRecord], IngestReport]:
    """Parse a record stream; bad lines are rejected with a reason, never fatal.

    Duplicate ids keep the first occurrence and reject the rest.
    """
    records: list[IncidentRecord] = []
    seen: set[str] = set()
    report = IngestReport()
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            record = parse_record_line(line)
        except ValueError as exc:
            report.rejected.append((lineno, str(exc)))
            continue
        if record.id in seen:
            report.rejected.append((lineno, f"duplicate id {record.id!r}"))
            continue
        seen.add(record.id)
        records.append(record)
        report.accepted += 1
    return records, report
