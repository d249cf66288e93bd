"""Qualitative label schema: correctness/subtype taxonomy, annotation
records, disagreement flags, and tally tables."""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime, timezone

from ..agent.types import RootCausePrediction

CORRECTNESS_VALUES = ("correct", "incorrect")

SUBTYPES_BY_CORRECTNESS: dict[str, tuple[str, ...]] = {
    "correct": ("precise", "imprecise", "hallucination"),
    "incorrect": (
        "hallucination",
        "insufficient_evidence",
        "other",
        "reasoning_error",
        "retrieval_error",
    ),
}

VALID_LABEL_PAIRS: tuple[tuple[str, str], ...] = tuple(
    (correctness, subtype)
    for correctness, subtypes in SUBTYPES_BY_CORRECTNESS.items()
    for subtype in subtypes
)


@dataclass(frozen=True)
class QualitativeLabel:
    correctness: str
    subtype: str

    def __post_init__(self) -> None:
        if self.correctness not in CORRECTNESS_VALUES:
            raise ValueError(
                f"correctness must be one of {CORRECTNESS_VALUES}, "
                f"got {self.correctness!r}"
            )
        allowed = SUBTYPES_BY_CORRECTNESS[self.correctness]
        if self.subtype not in allowed:
            raise ValueError(
                f"subtype {self.subtype!r} is not valid for "
                f"{self.correctness!r}; allowed: {', '.join(allowed)}"
            )


@dataclass(frozen=True)
class AnnotatedRecord:
    prediction: RootCausePrediction
    label: QualitativeLabel
    annotator: str
    timestamp: str

    @property
    def item_key(self) -> tuple[str, str]:
        return (self.prediction.incident_id, self.prediction.model_tag)


def label_prediction(
    prediction: RootCausePrediction,
    label: QualitativeLabel,
    annotator: str,
    *,
    timestamp: str | None = None,
) -> AnnotatedRecord:
    if not annotator:
        raise ValueError("annotator id must be non-empty")
    if timestamp is None:
        timestamp = datetime.now(timezone.utc).isoformat()
    return AnnotatedRecord(
        prediction=prediction, label=label, annotator=annotator, timestamp=timestamp
    )


def agreement_flags(records: list[AnnotatedRecord]) -> dict[tuple[str, str], bool]:
    """Per item: True when all annotators agree, False on any disagreement."""
    by_item: dict[tuple[str, str], set[tuple[str, str]]] = {}
    for record in records:
        by_item.setdefault(record.item_key, set()).add(
            (record.label.correctness, record.label.subtype)
        )
    return {key: len(labels) == 1 for key, labels in by_item.items()}


@dataclass
class LabelTally:
    """Counts per (correctness, subtype) cell; totals always reconcile."""

    counts: dict[tuple[str, str], int] = field(default_factory=dict)

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def correctness_total(self, correctness: str) -> int:
        return sum(
            count
            for (label_correctness, _), count in self.counts.items()
            if label_correctness == correctness
        )


def tally_labels(labels: list[QualitativeLabel]) -> LabelTally:
    tally = LabelTally()
    for label in labels:
        key = (label.correctness, label.subtype)
        tally.counts[key] = tally.counts.get(key, 0) + 1
    return tally
