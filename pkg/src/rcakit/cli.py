"""Command-line entrypoints: serve the session service, run episodes and
baselines, evaluate predictions, ingest and index corpora, run scenarios,
and respond to live sessions headlessly."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .agent.types import AgentConfig, trajectory_from_json, trajectory_to_json
from .baselines import BaselineConfig, run_cot, run_ircot, run_rb
from .config import WorkbenchConfig, load_config
from .corpus.ingest import ingest_incidents
from .corpus.records import SummarizedIncident
from .corpus.store import CorpusStore, assign_splits
from .corpus.summarize import Summarizer, SummarizerConfig
from .gateway.http import make_sessions
from .retrieval.base import HashingEmbedder
from .retrieval.index import build_index, load_index
from .simenv.judge import judge_outcome
from .simenv.runner import run_scenario, shipped_scenario_path
from .simenv.scenario import load_scenario
from .text import truncate_tokens

RUN_MODES = ("react-br", "react-sq", "rb", "cot", "ircot")


def _fail(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return 2


def _scenario_path(spec: str) -> Path:
    path = Path(spec)
    if path.exists():
        return path
    return shipped_scenario_path(spec)


def _load_jsonl(path: str) -> list[dict]:
    rows = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip():
            continue
        try:
            rows.append(json.loads(line))
        except json.JSONDecodeError as exc:
            raise ValueError(f"{path}:{lineno}: invalid JSON: {exc.msg}") from exc
    return rows


# -- serve ---------------------------------------------------------------


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service.api import create_app
    from .service.launchers import CorpusLauncher, ScenarioLauncher
    from .service.sessions import SessionManager

    config = load_config(args.config)
    if args.corpus:
        store = CorpusStore(Path(args.corpus))
        sparse = dense = None
        if args.index_dir:
            sparse = load_index(Path(args.index_dir), "sparse")
            dense = load_index(Path(args.index_dir), "dense")
        launcher = CorpusLauncher(
            store, config.gateway, sparse_index=sparse, dense_index=dense
        )
    else:
        scenario = load_scenario(_scenario_path(args.scenario))
        launcher = ScenarioLauncher(scenario)
    persist = args.persist_dir or config.service.persist_dir or None
    manager = SessionManager(
        launcher, persist_dir=persist, base_config=config.agent
    )
    app = create_app(manager)
    port = args.port if args.port is not None else config.service.port
    host = args.host or config.service.host
    print(f"serving sessions on http://{host}:{port} ({type(launcher).__name__})")
    uvicorn.run(app, host=host, port=port, log_level="warning")
    return 0


# -- run -----------------------------------------------------------------


def _run_react(args, config: WorkbenchConfig, store: CorpusStore) -> int:
    from .agent.budget import RetrievalLedger
    from .agent.loop import run_episode
    from .tools.base import ToolContext
    from .tools.registry import build_toolset

    planner, utility = make_sessions(config.gateway)
    variant = "br" if args.mode == "react-br" else "sq"
    sparse = dense = None
    if args.index_dir:
        sparse = load_index(Path(args.index_dir), "sparse")
        dense = load_index(Path(args.index_dir), "dense")
    incident = store.get_summary(args.incident)
    context = ToolContext(
        incident=incident,
        raw_incident=store.records().get(args.incident),
        utility=utility,
        ledger=RetrievalLedger(config.retrieval.total_budget),
        store=store,
        sparse_index=sparse,
        dense_index=dense,
        retrieval_k=config.retrieval.k,
        mmr_lambda=config.retrieval.mmr_lambda,
    )
    trajectory = run_episode(
        incident,
        build_toolset(variant),
        config.agent,
        planner,
        context=context,
        model_tag=args.mode,
    )
    text = trajectory_to_json(trajectory, config.agent)
    if args.out:
        Path(args.out).write_text(text + "\n", encoding="utf-8")
        print(f"wrote {args.out} (terminal: {trajectory.terminal})")
    else:
        print(text)
    return 0


def _run_baseline(args, config: WorkbenchConfig, store: CorpusStore) -> int:
    from .agent.types import prediction_to_dict

    if not args.index_dir:
        return _fail("baseline modes require --index-dir")
    kind = "sparse" if args.mode in ("rb", "cot") else args.retriever
    index = load_index(Path(args.index_dir), kind)
    planner, _ = make_sessions(config.gateway)
    incident = store.get_summary(args.incident)
    baseline = BaselineConfig(
        mode=args.mode, k=args.k, retriever_kind=index.kind
    )
    if args.mode == "rb":
        prediction = run_rb(incident, store, index, planner, baseline)
    elif args.mode == "cot":
        prediction = run_cot(incident, store, index, planner, baseline)
    else:
        prediction, _trace = run_ircot(incident, store, index, planner, baseline)
    text = json.dumps(prediction_to_dict(prediction), indent=2, sort_keys=True)
    if args.out:
        Path(args.out).write_text(text + "\n", encoding="utf-8")
        print(f"wrote {args.out}")
    else:
        print(text)
    return 0


def cmd_run(args: argparse.Namespace) -> int:
    config = load_config(args.config)
    store = CorpusStore(Path(args.corpus))
    if args.incident not in store.summaries():
        return _fail(f"unknown incident '{args.incident}' (no summary in corpus)")
    if args.mode in ("react-br", "react-sq"):
        return _run_react(args, config, store)
    return _run_baseline(args, config, store)


# -- eval ----------------------------------------------------------------


def cmd_eval(args: argparse.Namespace) -> int:
    from .agent.types import RootCausePrediction
    from .evalkit.labels import QualitativeLabel
    from .evalkit.report import build_report, render_text, report_to_dict

    predictions = []
    for row in _load_jsonl(args.pred):
        predictions.append(
            RootCausePrediction(
                incident_id=row["incident_id"],
                predicted_root_cause=row["predicted_root_cause"],
                verdict=row.get("verdict", "specific"),
                model_tag=row.get("model_tag", ""),
            )
        )
    references = {}
    for row in _load_jsonl(args.ref):
        references[row["incident_id"]] = row.get("reference", row.get("root_cause", ""))
    labels = None
    if args.labels:
        labels = {}
        for row in _load_jsonl(args.labels):
            label = QualitativeLabel(row["correctness"], row["subtype"])
            labels.setdefault(row.get("model_tag", ""), []).append(label)
    report = build_report(
        predictions, references, embedder=HashingEmbedder(), labels=labels
    )
    if args.json:
        print(json.dumps(report_to_dict(report), indent=2, sort_keys=True))
    else:
        print(render_text(report))
    return 0


# -- ingest --------------------------------------------------------------


def _identity_summaries(store: CorpusStore, budget: int) -> list[SummarizedIncident]:
    """Summaries without a model: raw fields truncated to the token budget."""
    out = []
    for record in store.records().values():
        out.append(
            SummarizedIncident(
                id=record.id,
                title=record.title,
                summary_description=truncate_tokens(record.description, budget),
                summary_root_cause=(
                    truncate_tokens(record.root_cause, budget)
                    if record.root_cause and record.root_cause.strip()
                    else None
                ),
            )
        )
    return out


def cmd_ingest(args: argparse.Namespace) -> int:
    lines = Path(args.input).read_text(encoding="utf-8").splitlines()
    records, report = ingest_incidents(lines)
    store = CorpusStore.create(Path(args.out), records)
    split = assign_splits(
        [r.id for r in records],
        eval_fraction=args.eval_fraction,
        test_fraction=args.test_fraction,
        seed=args.seed,
    )
    store.write_splits(split)
    if args.summarize == "identity":
        store.write_summaries(_identity_summaries(store, args.summary_budget))
    elif args.summarize == "llm":
        config = load_config(args.config)
        _, utility = make_sessions(config.gateway)
        summarizer = Summarizer(
            utility, SummarizerConfig(summary_budget=args.summary_budget)
        )
        summaries = []
        for record in store.records().values():
            summary = summarizer.summarize_incident(record)
            if record.comments:
                summary.summary_discussion = summarizer.summarize_discussion(
                    record.comments
                )
            summaries.append(summary)
        store.write_summaries(summaries)
    print(
        f"ingested {report.accepted} record(s), rejected {report.rejected_count} "
        f"(train {len(split.train)}, eval {len(split.eval)}, test {len(split.test)})"
    )
    for lineno, reason in report.rejected:
        print(f"  line {lineno}: {reason}")
    return 0


# -- index ---------------------------------------------------------------


def cmd_index(args: argparse.Namespace) -> int:
    store = CorpusStore(Path(args.corpus))
    embedder = HashingEmbedder() if args.kind == "dense" else None
    index = build_index(store, args.kind, embedder=embedder)
    name = args.name or args.kind
    index.save(Path(args.out), name)
    print(f"built {args.kind} index over {len(index.doc_ids)} document(s) -> "
          f"{Path(args.out) / (name + '.dat')}")
    return 0


# -- scenario ------------------------------------------------------------


def cmd_scenario(args: argparse.Namespace) -> int:
    if args.scenario_command == "run":
        scenario = load_scenario(_scenario_path(args.spec))
        run = run_scenario(scenario, args.script)
        payload = {
            "scenario": run.scenario_id,
            "script": run.script_name,
            "terminal": run.trajectory.terminal,
            "steps": len(run.trajectory.steps),
            "matched_outcome": run.judgment.matched_outcome,
        }
        if args.json:
            print(json.dumps(payload, indent=2, sort_keys=True))
        else:
            print(
                f"scenario {payload['scenario']} script {payload['script']}: "
                f"{payload['steps']} step(s), terminal {payload['terminal']}, "
                f"outcome {payload['matched_outcome'] or 'none'}"
            )
            _print_judgment(run.judgment)
        if args.out:
            Path(args.out).write_text(
                trajectory_to_json(run.trajectory, AgentConfig()) + "\n",
                encoding="utf-8",
            )
        return 0
    # judge: score an existing trajectory file against a scenario's outcomes
    scenario = load_scenario(_scenario_path(args.spec))
    trajectory = trajectory_from_json(Path(args.trajectory).read_text(encoding="utf-8"))
    judgment = judge_outcome(scenario, trajectory)
    print(f"matched outcome: {judgment.matched_outcome or 'none'}")
    _print_judgment(judgment)
    return 0


def _print_judgment(judgment) -> None:
    for outcome_id, results in judgment.details.items():
        verdict = "match" if all(r.passed for r in results) else "no match"
        print(f"  {outcome_id}: {verdict}")
        for result in results:
            mark = "pass" if result.passed else "FAIL"
            print(f"    [{mark}] {result.rule}: {result.detail}")


# -- respond -------------------------------------------------------------


def cmd_respond(args: argparse.Namespace) -> int:
    import httpx

    url = args.url.rstrip("/") + f"/sessions/{args.session}/respond"
    body = {"action": args.action}
    if args.text:
        body["text"] = args.text
    response = httpx.post(url, json=body, timeout=args.timeout)
    try:
        payload = response.json()
    except ValueError:
        payload = {"detail": response.text}
    if response.status_code != 200:
        return _fail(f"{response.status_code}: {payload.get('detail', payload)}")
    print(f"ok (session state: {payload.get('state', 'unknown')})")
    return 0


# -- parser --------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rcakit",
        description="Root-cause-analysis agent workbench",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("serve", help="serve sessions over HTTP/SSE")
    p.add_argument("--port", type=int, default=None)
    p.add_argument("--host", default="")
    p.add_argument("--config", default=None, help="workbench YAML config")
    p.add_argument("--scenario", default="setting_drift",
                   help="shipped scenario name or a scenario YAML path")
    p.add_argument("--corpus", default=None, help="serve episodes over this corpus")
    p.add_argument("--index-dir", default=None)
    p.add_argument("--persist-dir", default=None, help="append-only session logs")
    p.set_defaults(fn=cmd_serve)

    p = sub.add_parser("run", help="run one episode or baseline locally")
    p.add_argument("--mode", choices=RUN_MODES, required=True)
    p.add_argument("--incident", required=True)
    p.add_argument("--corpus", required=True)
    p.add_argument("--config", default=None)
    p.add_argument("--index-dir", default=None)
    p.add_argument("--retriever", choices=("sparse", "dense"), default="sparse")
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_run)

    p = sub.add_parser("eval", help="score prediction files against references")
    p.add_argument("--pred", required=True, help="predictions JSONL")
    p.add_argument("--ref", required=True, help="references JSONL")
    p.add_argument("--labels", default=None, help="qualitative labels JSONL")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_eval)

    p = sub.add_parser("ingest", help="build a corpus from an incident JSONL file")
    p.add_argument("--input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--eval-fraction", type=float, default=0.1)
    p.add_argument("--test-fraction", type=float, default=0.2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--summarize", choices=("identity", "llm", "none"),
                   default="identity")
    p.add_argument("--summary-budget", type=int, default=128)
    p.add_argument("--config", default=None)
    p.set_defaults(fn=cmd_ingest)

    p = sub.add_parser("index", help="build a retrieval index over a corpus")
    p.add_argument("--corpus", required=True)
    p.add_argument("--kind", choices=("sparse", "dense"), required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--name", default=None)
    p.set_defaults(fn=cmd_index)

    p = sub.add_parser("scenario", help="run or judge simulated scenarios")
    ssub = p.add_subparsers(dest="scenario_command", required=True)
    pr = ssub.add_parser("run", help="run a scenario script offline")
    pr.add_argument("spec", help="shipped scenario name or YAML path")
    pr.add_argument("--script", required=True)
    pr.add_argument("--json", action="store_true")
    pr.add_argument("--out", default=None, help="write the trajectory JSON here")
    pr.set_defaults(fn=cmd_scenario)
    pj = ssub.add_parser("judge", help="judge a saved trajectory file")
    pj.add_argument("trajectory", help="trajectory JSON path")
    pj.add_argument("--spec", required=True)
    pj.set_defaults(fn=cmd_scenario)

    p = sub.add_parser("respond", help="answer a live session's pending gate")
    p.add_argument("--url", default="http://127.0.0.1:8765")
    p.add_argument("--session", required=True)
    p.add_argument("--action",
                   choices=("approve", "deny", "human_answer", "interject", "abort"),
                   required=True)
    p.add_argument("--text", default="")
    p.add_argument("--timeout", type=float, default=10.0)
    p.set_defaults(fn=cmd_respond)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, KeyError, FileNotFoundError) as exc:
        message = exc.args[0] if isinstance(exc, KeyError) and exc.args else str(exc)
        return _fail(str(message))


if __name__ == "__main__":
    raise SystemExit(main())
