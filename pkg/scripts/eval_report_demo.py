"""Score root-cause predictions against references and print the report.

Usage:
    python3 scripts/eval_report_demo.py

Builds a tiny batch of predictions from two hypothetical models, scores them
with the lexical and semantic metrics, attaches qualitative labels, and
renders the combined report table.
"""

from __future__ import annotations

from rcakit.agent.types import RootCausePrediction
from rcakit.evalkit.labels import QualitativeLabel
from rcakit.evalkit.report import build_report, render_text
from rcakit.retrieval.base import HashingEmbedder

REFERENCES = {
    "INC-201": "the storage frontend rollout drifted a config flag",
    "INC-202": "token cache sized too small for peak load",
    "INC-203": "stale resolver configuration on the agent nodes",
}

PREDICTIONS = [
    RootCausePrediction(
        incident_id="INC-201",
        predicted_root_cause="a config flag drifted during the storage frontend rollout",
        verdict="specific",
        model_tag="scripted-a",
    ),
    RootCausePrediction(
        incident_id="INC-202",
        predicted_root_cause="the token cache was sized too small",
        verdict="specific",
        model_tag="scripted-a",
    ),
    RootCausePrediction(
        incident_id="INC-203",
        predicted_root_cause="a kernel regression rebooted the nodes",
        verdict="specific",
        model_tag="scripted-a",
    ),
    RootCausePrediction(
        incident_id="INC-201",
        predicted_root_cause="insufficient evidence to determine the cause",
        verdict="insufficient_evidence",
        model_tag="scripted-b",
    ),
    RootCausePrediction(
        incident_id="INC-202",
        predicted_root_cause="token cache sized too small for peak load",
        verdict="specific",
        model_tag="scripted-b",
    ),
]

LABELS = {
    "scripted-a": [
        QualitativeLabel("correct", "precise"),
        QualitativeLabel("correct", "imprecise"),
        QualitativeLabel("incorrect", "hallucination"),
    ],
    "scripted-b": [
        QualitativeLabel("incorrect", "insufficient_evidence"),
        QualitativeLabel("correct", "precise"),
    ],
}


def main() -> int:
    report = build_report(
        PREDICTIONS, REFERENCES, embedder=HashingEmbedder(), labels=LABELS
    )
    print(render_text(report))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
