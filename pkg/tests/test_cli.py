"""Command-line entrypoints driven in-process: ingest/index round trips,
scenario runs and judging, evaluation rendering, respond against a stubbed
HTTP client, and error paths that must exit 2 with an error: line."""

from __future__ import annotations

import json
import re
from pathlib import Path

import pytest

from rcakit.cli import main
from rcakit.corpus.store import CorpusStore
from rcakit.retrieval.index import load_index

GOOD_RECORDS = [
    {
        "id": "INC-1",
        "title": "Storage account write failures",
        "description": "Uploads to the blob endpoint fail with 503 errors.",
        "root_cause": "certificate expired on the gateway",
    },
    {
        "id": "INC-2",
        "title": "Login timeouts in the west region",
        "description": "Interactive sign-ins time out after thirty seconds.",
        "root_cause": "connection pool exhausted on the auth frontend",
    },
    {
        "id": "INC-3",
        "title": "Quota exceeded on build agents",
        "description": "Contributors cannot schedule builds; quota errors.",
        "root_cause": "stale quota cache never refreshed after migration",
    },
    {
        "id": "INC-4",
        "title": "Billing export stuck",
        "description": "Nightly billing export job has not completed.",
        "root_cause": "deadlock between export and compaction jobs",
    },
    {
        "id": "INC-5",
        "title": "Search latency regression",
        "description": "P99 search latency tripled after the rollout.",
        "root_cause": "query planner regression in the new build",
    },
]


@pytest.fixture()
def incidents_file(tmp_path) -> Path:
    lines = [
        json.dumps(GOOD_RECORDS[0]),
        json.dumps(GOOD_RECORDS[1]),
        "{not json",
        json.dumps(GOOD_RECORDS[2]),
        json.dumps({"title": "record without an id"}),
        json.dumps(GOOD_RECORDS[3]),
        json.dumps(GOOD_RECORDS[0]),  # duplicate id, first occurrence wins
        json.dumps(GOOD_RECORDS[4]),
    ]
    path = tmp_path / "incidents.jsonl"
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


@pytest.fixture()
def corpus_dir(incidents_file, tmp_path, capsys) -> Path:
    out = tmp_path / "corpus"
    assert main(["ingest", "--input", str(incidents_file), "--out", str(out)]) == 0
    capsys.readouterr()  # the fixture consumes its own output
    return out


# -- ingest -------------------------------------------------------------------


def test_ingest_reports_counts_and_rejections(incidents_file, tmp_path, capsys):
    out = tmp_path / "corpus"
    code = main(["ingest", "--input", str(incidents_file), "--out", str(out)])
    assert code == 0
    stdout = capsys.readouterr().out
    lines = stdout.splitlines()
    match = re.fullmatch(
        r"ingested 5 record\(s\), rejected 3 "
        r"\(train (\d+), eval (\d+), test (\d+)\)",
        lines[0],
    )
    assert match, lines[0]
    assert sum(int(group) for group in match.groups()) == 5
    assert lines[1].startswith("  line 3: invalid JSON:")
    assert lines[2] == "  line 5: missing field: id"
    assert lines[3] == "  line 7: duplicate id 'INC-1'"

    store = CorpusStore(out)
    assert sorted(store.records()) == ["INC-1", "INC-2", "INC-3", "INC-4", "INC-5"]
    # identity summarization is the default: every record gets a summary
    assert sorted(store.summaries()) == sorted(store.records())
    summary = store.get_summary("INC-1")
    assert summary.summary_description == GOOD_RECORDS[0]["description"]
    assert summary.summary_root_cause == GOOD_RECORDS[0]["root_cause"]


def test_ingest_identity_respects_summary_budget(incidents_file, tmp_path, capsys):
    out = tmp_path / "corpus"
    code = main(
        [
            "ingest",
            "--input",
            str(incidents_file),
            "--out",
            str(out),
            "--summary-budget",
            "3",
        ]
    )
    assert code == 0
    capsys.readouterr()
    for summary in CorpusStore(out).summaries().values():
        assert len(summary.summary_description.split()) <= 3


def test_ingest_summarize_none_skips_summaries(incidents_file, tmp_path, capsys):
    out = tmp_path / "corpus"
    code = main(
        [
            "ingest",
            "--input",
            str(incidents_file),
            "--out",
            str(out),
            "--summarize",
            "none",
        ]
    )
    assert code == 0
    capsys.readouterr()
    assert not (out / "summaries.jsonl").exists()


def test_ingest_missing_input_exits_2(tmp_path, capsys):
    code = main(
        ["ingest", "--input", str(tmp_path / "nope.jsonl"), "--out", str(tmp_path / "c")]
    )
    assert code == 2
    assert capsys.readouterr().err.startswith("error: ")


# -- index --------------------------------------------------------------------


def test_index_builds_sparse_and_dense(corpus_dir, tmp_path, capsys):
    index_dir = tmp_path / "indexes"
    assert main(["index", "--corpus", str(corpus_dir), "--kind", "sparse",
                 "--out", str(index_dir)]) == 0
    sparse_out = capsys.readouterr().out
    match = re.search(r"built sparse index over (\d+) document\(s\)", sparse_out)
    assert match
    assert str(index_dir / "sparse.dat") in sparse_out
    doc_count = int(match.group(1))
    assert doc_count == len(CorpusStore(corpus_dir).split().train)

    assert main(["index", "--corpus", str(corpus_dir), "--kind", "dense",
                 "--out", str(index_dir)]) == 0
    capsys.readouterr()
    sparse = load_index(index_dir, "sparse")
    dense = load_index(index_dir, "dense")
    assert sparse.kind == "sparse" and dense.kind == "dense"
    assert len(sparse.doc_ids) == doc_count
    assert sorted(sparse.doc_ids) == sorted(dense.doc_ids)


def test_index_custom_name(corpus_dir, tmp_path, capsys):
    index_dir = tmp_path / "indexes"
    assert main(["index", "--corpus", str(corpus_dir), "--kind", "sparse",
                 "--out", str(index_dir), "--name", "bm25"]) == 0
    capsys.readouterr()
    assert (index_dir / "bm25.dat").exists()
    assert load_index(index_dir, "bm25").kind == "sparse"


# -- run error paths ------------------------------------------------------------


def test_run_unknown_incident_exits_2(corpus_dir, capsys):
    code = main(
        ["run", "--mode", "rb", "--incident", "INC-404", "--corpus", str(corpus_dir)]
    )
    assert code == 2
    assert capsys.readouterr().err == (
        "error: unknown incident 'INC-404' (no summary in corpus)\n"
    )


def test_run_baseline_requires_index_dir(corpus_dir, capsys):
    code = main(
        ["run", "--mode", "rb", "--incident", "INC-1", "--corpus", str(corpus_dir)]
    )
    assert code == 2
    assert capsys.readouterr().err == "error: baseline modes require --index-dir\n"


# -- scenario --------------------------------------------------------------------


def test_scenario_run_prints_summary_and_judgment(capsys):
    code = main(["scenario", "run", "setting_drift", "--script", "outcome1"])
    assert code == 0
    stdout = capsys.readouterr().out
    assert stdout.splitlines()[0] == (
        "scenario setting-drift script outcome1: 3 step(s), "
        "terminal final_answer, outcome outcome1"
    )
    assert "  outcome1: match" in stdout
    assert "  outcome2: no match" in stdout
    assert "[pass]" in stdout


def test_scenario_run_json_payload(capsys):
    code = main(["scenario", "run", "setting_drift", "--script", "outcome2", "--json"])
    assert code == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload == {
        "scenario": "setting-drift",
        "script": "outcome2",
        "terminal": "final_answer",
        "steps": 4,
        "matched_outcome": "outcome2",
    }


def test_scenario_run_writes_trajectory_then_judge_scores_it(tmp_path, capsys):
    trajectory_path = tmp_path / "trajectory.json"
    code = main(
        [
            "scenario",
            "run",
            "setting_drift",
            "--script",
            "outcome1",
            "--out",
            str(trajectory_path),
        ]
    )
    assert code == 0
    capsys.readouterr()
    saved = json.loads(trajectory_path.read_text(encoding="utf-8"))
    assert saved["terminal"] == "final_answer"
    assert len(saved["steps"]) == 3

    code = main(
        ["scenario", "judge", str(trajectory_path), "--spec", "setting_drift"]
    )
    assert code == 0
    stdout = capsys.readouterr().out
    assert stdout.splitlines()[0] == "matched outcome: outcome1"


def test_scenario_accepts_yaml_paths_too(tmp_path, capsys):
    from rcakit.simenv.runner import shipped_scenario_path

    spec = shipped_scenario_path("setting_drift")
    code = main(["scenario", "run", str(spec), "--script", "outcome1", "--json"])
    assert code == 0
    assert json.loads(capsys.readouterr().out)["matched_outcome"] == "outcome1"


def test_scenario_unknown_name_exits_2(capsys):
    code = main(["scenario", "run", "ghost", "--script", "outcome1"])
    assert code == 2
    assert capsys.readouterr().err == (
        "error: no shipped scenario 'ghost'; available: multi_kba, setting_drift\n"
    )


def test_scenario_unknown_script_exits_2(capsys):
    code = main(["scenario", "run", "setting_drift", "--script", "nope"])
    assert code == 2
    assert capsys.readouterr().err == (
        "error: unknown script 'nope'; available: "
        "error_recovery, interactive, outcome1, outcome2\n"
    )


# -- eval ------------------------------------------------------------------------


def write_jsonl(path: Path, rows: list[dict]) -> Path:
    path.write_text(
        "\n".join(json.dumps(row) for row in rows) + "\n", encoding="utf-8"
    )
    return path


def test_eval_renders_metric_table(tmp_path, capsys):
    pred = write_jsonl(
        tmp_path / "pred.jsonl",
        [
            {
                "incident_id": "INC-1",
                "predicted_root_cause": "certificate expired on the gateway",
                "model_tag": "rb-k3",
            },
            {
                "incident_id": "INC-2",
                "predicted_root_cause": "connection pool exhausted on the auth frontend",
                "model_tag": "rb-k3",
            },
        ],
    )
    ref = write_jsonl(
        tmp_path / "ref.jsonl",
        [
            {
                "incident_id": "INC-1",
                "reference": "certificate expired on the gateway",
            },
            {
                "incident_id": "INC-2",
                "reference": "connection pool exhausted on the auth frontend",
            },
        ],
    )
    code = main(["eval", "--pred", str(pred), "--ref", str(ref)])
    assert code == 0
    stdout = capsys.readouterr().out
    header = stdout.splitlines()[0]
    for column in ("model", "C-BLEU", "S-BLEU", "ROUGE-L", "METEOR", "SemSim", "n"):
        assert column in header
    row = next(line for line in stdout.splitlines() if line.startswith("rb-k3"))
    assert "100.00" in row  # identical candidate and reference
    assert row.rstrip().endswith("2")


def test_eval_json_structure_and_labels(tmp_path, capsys):
    pred = write_jsonl(
        tmp_path / "pred.jsonl",
        [
            {
                "incident_id": "INC-1",
                "predicted_root_cause": "certificate expired on the gateway",
                "model_tag": "rb-k3",
            }
        ],
    )
    ref = write_jsonl(
        tmp_path / "ref.jsonl",
        [{"incident_id": "INC-1", "reference": "certificate expired on the gateway"}],
    )
    labels = write_jsonl(
        tmp_path / "labels.jsonl",
        [
            {"model_tag": "rb-k3", "correctness": "correct", "subtype": "precise"},
            {"model_tag": "rb-k3", "correctness": "incorrect", "subtype": "other"},
        ],
    )
    code = main(
        ["eval", "--pred", str(pred), "--ref", str(ref), "--labels", str(labels),
         "--json"]
    )
    assert code == 0
    payload = json.loads(capsys.readouterr().out)
    row = next(r for r in payload["rows"] if r["model_tag"] == "rb-k3")
    assert row["count"] == 1
    assert row["s_bleu"] == pytest.approx(1.0)
    tally = payload["label_tallies"]["rb-k3"]
    assert tally["total"] == 2
    assert tally["counts"]["correct/precise"] == 1
    assert tally["counts"]["incorrect/other"] == 1


def test_eval_missing_reference_exits_2(tmp_path, capsys):
    pred = write_jsonl(
        tmp_path / "pred.jsonl",
        [
            {
                "incident_id": "INC-404",
                "predicted_root_cause": "anything",
                "model_tag": "rb-k3",
            }
        ],
    )
    ref = write_jsonl(
        tmp_path / "ref.jsonl",
        [{"incident_id": "INC-1", "reference": "certificate expired"}],
    )
    code = main(["eval", "--pred", str(pred), "--ref", str(ref)])
    assert code == 2
    assert capsys.readouterr().err == (
        "error: no reference for incident(s): INC-404\n"
    )


def test_eval_bad_jsonl_line_names_file_and_line(tmp_path, capsys):
    pred = tmp_path / "pred.jsonl"
    pred.write_text(
        json.dumps(
            {
                "incident_id": "INC-1",
                "predicted_root_cause": "x",
                "model_tag": "rb-k3",
            }
        )
        + "\n{broken\n",
        encoding="utf-8",
    )
    ref = write_jsonl(
        tmp_path / "ref.jsonl", [{"incident_id": "INC-1", "reference": "x"}]
    )
    code = main(["eval", "--pred", str(pred), "--ref", str(ref)])
    assert code == 2
    err = capsys.readouterr().err
    assert err.startswith(f"error: {pred}:2: invalid JSON:")


# -- respond ------------------------------------------------------------------------


class FakeResponse:
    def __init__(self, status_code: int, payload: dict):
        self.status_code = status_code
        self._payload = payload
        self.text = json.dumps(payload)

    def json(self) -> dict:
        return self._payload


def test_respond_posts_action_and_reports_state(monkeypatch, capsys):
    calls = {}

    def fake_post(url, json=None, timeout=None):
        calls["url"] = url
        calls["body"] = json
        calls["timeout"] = timeout
        return FakeResponse(200, {"ok": True, "state": "running"})

    monkeypatch.setattr("httpx.post", fake_post)
    code = main(
        [
            "respond",
            "--session",
            "abc123",
            "--action",
            "deny",
            "--text",
            "use the replica instead",
        ]
    )
    assert code == 0
    assert capsys.readouterr().out == "ok (session state: running)\n"
    assert calls["url"] == "http://127.0.0.1:8765/sessions/abc123/respond"
    assert calls["body"] == {"action": "deny", "text": "use the replica instead"}
    assert calls["timeout"] == 10.0


def test_respond_conflict_exits_2(monkeypatch, capsys):
    monkeypatch.setattr(
        "httpx.post",
        lambda url, json=None, timeout=None: FakeResponse(
            409, {"detail": "cannot approve: session state is 'finished'"}
        ),
    )
    code = main(["respond", "--session", "abc123", "--action", "approve"])
    assert code == 2
    assert capsys.readouterr().err == (
        "error: 409: cannot approve: session state is 'finished'\n"
    )
