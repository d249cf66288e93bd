"""Evaluation report assembly and rendering.

Per-item scores aggregate into one row per model. Lexical scores are stored
in [0, 1] and rendered x100 with two decimals (0.0597 -> "5.97"); semantic
similarity is rendered with three decimals.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..agent.types import RootCausePrediction
from ..retrieval.base import Embedder
from .labels import (
    CORRECTNESS_VALUES,
    SUBTYPES_BY_CORRECTNESS,
    LabelTally,
    QualitativeLabel,
    tally_labels,
)
from .metrics import (
    MetricConfig,
    corpus_bleu,
    meteor_lite,
    rouge_l,
    semantic_similarity,
    sentence_bleu,
)


@dataclass(frozen=True)
class ItemScores:
    incident_id: str
    model_tag: str
    s_bleu: float
    rouge_l: float
    meteor: float
    semantic: float


@dataclass(frozen=True)
class ModelRow:
    model_tag: str
    count: int
    c_bleu: float
    s_bleu: float
    rouge_l: float
    meteor: float
    semantic: float


@dataclass
class EvaluationReport:
    rows: list[ModelRow] = field(default_factory=list)
    per_item: list[ItemScores] = field(default_factory=list)
    label_tallies: dict[str, LabelTally] = field(default_factory=dict)


def _mean(values: list[float]) -> float:
    return sum(values) / len(values) if values else 0.0


def build_report(
    predictions: list[RootCausePrediction],
    references: dict[str, str],
    *,
    embedder: Embedder,
    config: MetricConfig | None = None,
    labels: dict[str, list[QualitativeLabel]] | None = None,
) -> EvaluationReport:
    """Score predictions against references keyed by incident id.

    `labels`, when given, maps model tag -> labels for that model's items.
    """
    config = config or MetricConfig()
    missing = sorted({p.incident_id for p in predictions} - set(references))
    if missing:
        raise ValueError(f"no reference for incident(s): {', '.join(missing)}")

    per_item: list[ItemScores] = []
    by_model: dict[str, list[tuple[str, str]]] = {}
    for prediction in predictions:
        reference = references[prediction.incident_id]
        text = prediction.predicted_root_cause
        per_item.append(
            ItemScores(
                incident_id=prediction.incident_id,
                model_tag=prediction.model_tag,
                s_bleu=sentence_bleu(text, reference, config),
                rouge_l=rouge_l(text, reference, config),
                meteor=meteor_lite(text, reference, config),
                semantic=semantic_similarity(text, reference, embedder),
            )
        )
        by_model.setdefault(prediction.model_tag, []).append((text, reference))

    rows: list[ModelRow] = []
    for model_tag in sorted(by_model):
        pairs = by_model[model_tag]
        items = [i for i in per_item if i.model_tag == model_tag]
        rows.append(
            ModelRow(
                model_tag=model_tag,
                count=len(items),
                c_bleu=corpus_bleu(
                    [p for p, _ in pairs], [r for _, r in pairs], config
                ),
                s_bleu=_mean([i.s_bleu for i in items]),
                rouge_l=_mean([i.rouge_l for i in items]),
                meteor=_mean([i.meteor for i in items]),
                semantic=_mean([i.semantic for i in items]),
            )
        )

    tallies = {}
    if labels:
        tallies = {tag: tally_labels(items) for tag, items in labels.items()}
    return EvaluationReport(rows=rows, per_item=per_item, label_tallies=tallies)


def _x100(value: float) -> str:
    return f"{value * 100:.2f}"


def _render_metric_table(rows: list[ModelRow]) -> str:
    header = ["model", "C-BLEU", "S-BLEU", "ROUGE-L", "METEOR", "SemSim", "n"]
    body = [
        [
            row.model_tag,
            _x100(row.c_bleu),
            _x100(row.s_bleu),
            _x100(row.rouge_l),
            _x100(row.meteor),
            f"{row.semantic:.3f}",
            str(row.count),
        ]
        for row in rows
    ]
    widths = [
        max(len(header[i]), *(len(line[i]) for line in body)) if body else len(header[i])
        for i in range(len(header))
    ]

    def fmt(line: list[str]) -> str:
        cells = [line[0].ljust(widths[0])]
        cells += [cell.rjust(widths[i]) for i, cell in enumerate(line) if i > 0]
        return "  ".join(cells).rstrip()

    return "\n".join([fmt(header), *(fmt(line) for line in body)])


def _render_tally_table(tallies: dict[str, LabelTally]) -> str:
    lines = ["labels (count by correctness/subtype):"]
    for model_tag in sorted(tallies):
        tally = tallies[model_tag]
        lines.append(f"{model_tag}: total={tally.total}")
        for correctness in CORRECTNESS_VALUES:
            total = tally.correctness_total(correctness)
            lines.append(f"  {correctness}: {total}")
            for subtype in SUBTYPES_BY_CORRECTNESS[correctness]:
                count = tally.counts.get((correctness, subtype), 0)
                lines.append(f"    {subtype}: {count}")
    return "\n".join(lines)


def render_text(report: EvaluationReport) -> str:
    parts = [_render_metric_table(report.rows)]
    if report.label_tallies:
        parts.append(_render_tally_table(report.label_tallies))
    return "\n\n".join(parts)


def report_to_dict(report: EvaluationReport) -> dict:
    return {
        "rows": [
            {
                "model_tag": row.model_tag,
                "count": row.count,
                "c_bleu": row.c_bleu,
                "s_bleu": row.s_bleu,
                "rouge_l": row.rouge_l,
                "meteor": row.meteor,
                "semantic": row.semantic,
            }
            for row in report.rows
        ],
        "per_item": [
            {
                "incident_id": item.incident_id,
                "model_tag": item.model_tag,
                "s_bleu": item.s_bleu,
                "rouge_l": item.rouge_l,
                "meteor": item.meteor,
                "semantic": item.semantic,
            }
            for item in report.per_item
        ],
        "label_tallies": {
            tag: {
                "total": tally.total,
                "counts": {
                    f"{correctness}/{subtype}": count
                    for (correctness, subtype), count in sorted(tally.counts.items())
                },
            }
            for tag, tally in report.label_tallies.items()
        },
    }
