"""Evaluation suite: lexical/semantic metrics, the qualitative label schema,
and report assembly/rendering."""

from .labels import (
    CORRECTNESS_VALUES,
    SUBTYPES_BY_CORRECTNESS,
    VALID_LABEL_PAIRS,
    AnnotatedRecord,
    LabelTally,
    QualitativeLabel,
    agreement_flags,
    label_prediction,
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
from .report import (
    EvaluationReport,
    ItemScores,
    ModelRow,
    build_report,
    render_text,
    report_to_dict,
)

__all__ = [
    "AnnotatedRecord",
    "CORRECTNESS_VALUES",
    "EvaluationReport",
    "ItemScores",
    "LabelTally",
    "MetricConfig",
    "ModelRow",
    "QualitativeLabel",
    "SUBTYPES_BY_CORRECTNESS",
    "VALID_LABEL_PAIRS",
    "agreement_flags",
    "build_report",
    "corpus_bleu",
    "label_prediction",
    "meteor_lite",
    "render_text",
    "report_to_dict",
    "rouge_l",
    "semantic_similarity",
    "sentence_bleu",
    "tally_labels",
]
