"""Episode-level accounting of unique retrieved documents."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class RetrievalLedger:
    """Tracks unique document ids charged against an episode budget.

    Re-admitting an already-seen id is free; new ids are admitted while the
    budget has room and dropped otherwise, so the unique-id count can never
    exceed ``total_budget``.
    """

    total_budget: int
    seen: set[str] = field(default_factory=set)

    def __post_init__(self) -> None:
        if self.total_budget < 0:
            raise ValueError("total_budget must be >= 0")

    @property
    def remaining(self) -> int:
        return self.total_budget - len(self.seen)

    def exhausted(self) -> bool:
        return len(self.seen) >= self.total_budget

    def admit(self, doc_ids: list[str]) -> tuple[list[str], list[str]]:
        """Split ids into (admitted, dropped), charging new admissions."""
        admitted: list[str] = []
        dropped: list[str] = []
        for doc_id in doc_ids:
            if doc_id in self.seen:
                admitted.append(doc_id)
            elif len(self.seen) < self.total_budget:
                self.seen.add(doc_id)
                admitted.append(doc_id)
            else:
                dropped.append(doc_id)
        return admitted, dropped
