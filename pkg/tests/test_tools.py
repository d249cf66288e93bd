"""Tool surface: registry assembly, incident Q/A grounding, both historical
retrieval styles with budget accounting, the database query/analysis pair,
knowledge-base tools with the pinned-article bypass, and the human channel."""

import json

import pytest

from rcakit.agent.budget import RetrievalLedger
from rcakit.corpus.records import IncidentRecord, SummarizedIncident
from rcakit.gateway.core import LlmSession
from rcakit.gateway.scripted import ScriptedBackend
from rcakit.retrieval.base import HashingEmbedder
from rcakit.retrieval.index import build_index
from rcakit.tools.base import TableResult, ToolContext, ToolDescriptor, Toolset
from rcakit.tools.database import (
    SAFE_TABLE_OPS,
    db_query_tool,
    execute_plan,
    render_answer,
    table_qa_tool,
)
from rcakit.tools.general import (
    SEARCH_SCRATCH_KEY,
    grounded_answer,
    historical_incidents_br_tool,
    historical_incidents_qa_tool,
    historical_incidents_search_tool,
    incident_details_qa_tool,
)
from rcakit.tools.human import ScriptedHuman, ask_human_tool, timeout_message
from rcakit.tools.kba import KBADocument, KbaStore, kba_plan_tool, kba_qa_tool
from rcakit.tools.registry import build_toolset, case_study_tools, general_tools

INCIDENT = SummarizedIncident(
    id="INC-0",
    title="blob upload errors",
    summary_description="uploads fail with blob error codes",
)

RAW = IncidentRecord(
    id="INC-0",
    title="blob upload errors",
    description="customers report blob error codes when uploading large files",
)


def _utility(responses):
    return LlmSession(ScriptedBackend(responses, repeat=False))


def _context(**overrides):
    defaults = dict(incident=INCIDENT, raw_incident=RAW)
    defaults.update(overrides)
    return ToolContext(**defaults)


# --- registry ----------------------------------------------------------------


def test_registry_variants():
    br = build_toolset("br")
    assert br.names() == ["incident_details_qa", "historical_incidents"]
    sq = build_toolset("sq")
    assert sq.names() == [
        "incident_details_qa",
        "historical_incidents_search",
        "historical_incidents_qa",
    ]
    full = build_toolset("br", include_case_study=True)
    assert set(full.names()) >= {"db_query", "table_qa", "kba_qa", "kba_plan", "ask_human"}
    case = build_toolset(None, include_case_study=True)
    assert case.names() == ["db_query", "table_qa", "kba_qa", "kba_plan", "ask_human"]


def test_registry_unknown_variant():
    with pytest.raises(ValueError, match="unknown toolset variant"):
        general_tools("xx")


def test_toolset_rejects_duplicate_names():
    tool = case_study_tools()[0]
    with pytest.raises(ValueError, match="duplicate tool name"):
        Toolset([tool, tool])


def test_descriptor_requires_name():
    with pytest.raises(ValueError):
        ToolDescriptor(name="", description="d")


def test_retrieval_bearing_flags():
    flags = {t.name: t.descriptor.retrieval_bearing for t in build_toolset("sq", include_case_study=True)}
    assert flags["historical_incidents_search"] is True
    assert flags["kba_qa"] is False
    assert flags["kba_plan"] is False
    assert flags["db_query"] is False


# --- incident details Q/A ----------------------------------------------------


def test_incident_qa_guards():
    ctx = _context()
    assert incident_details_qa_tool("   ", ctx) == "provide a question about the incident"
    assert incident_details_qa_tool("q", _context(raw_incident=None)) == "no incident details available"
    blank = IncidentRecord(id="INC-0", title="t", description="   ")
    assert incident_details_qa_tool("q", _context(raw_incident=blank)) == "no description available"


def test_incident_qa_grounds_in_description():
    utility = _utility(["large file uploads fail"])
    ctx = _context(utility=utility)
    answer = incident_details_qa_tool("what fails?", ctx)
    assert answer == "large file uploads fail"
    prompt = utility.backend.entries  # one call made
    assert len(utility.calls) == 1


def test_grounded_answer_single_chunk_one_call():
    utility = _utility(["direct answer"])
    assert grounded_answer(utility, "short text", "q?", chunk_budget=64) == "direct answer"
    assert len(utility.calls) == 1


def test_grounded_answer_chunks_and_recombines():
    text = " ".join(f"w{i}" for i in range(10))
    utility = _utility(["part one", "part two", "combined"])
    answer = grounded_answer(utility, text, "q?", chunk_budget=5)
    assert answer == "combined"
    assert len(utility.calls) == 3  # two chunks + one recombination


# --- historical retrieval: search + Q/A --------------------------------------


@pytest.fixture
def sparse_ctx(store):
    index = build_index(store, "sparse")
    return _context(store=store, sparse_index=index, ledger=RetrievalLedger(10))


def test_search_stores_ids_in_scratch(sparse_ctx):
    out = historical_incidents_search_tool("blob error", sparse_ctx)
    assert out.startswith("found ")
    ids = sparse_ctx.scratch[SEARCH_SCRATCH_KEY]
    assert ids and all(i.startswith("INC-") for i in ids)
    assert set(ids) <= sparse_ctx.ledger.seen


def test_search_no_match(sparse_ctx):
    out = historical_incidents_search_tool("zzz qqq", sparse_ctx)
    assert out == "no incidents found"
    assert sparse_ctx.scratch[SEARCH_SCRATCH_KEY] == []


def test_qa_without_search_first(sparse_ctx):
    out = historical_incidents_qa_tool("what happened?", sparse_ctx)
    assert out == (
        "no retrieved incidents to answer over; run "
        "historical_incidents_search first, then ask again"
    )


def test_qa_answers_over_searched_set(store):
    utility = _utility(["the rollout drifted"])
    ctx = _context(
        store=store,
        sparse_index=build_index(store, "sparse"),
        utility=utility,
    )
    historical_incidents_search_tool("blob", ctx)
    answer = historical_incidents_qa_tool("what was the cause?", ctx)
    assert answer == "the rollout drifted"


def test_search_respects_budget_note(store):
    ctx = _context(
        store=store,
        sparse_index=build_index(store, "sparse"),
        ledger=RetrievalLedger(1),
        retrieval_k=3,
    )
    out = historical_incidents_search_tool("blob error", ctx)
    assert "(retrieval budget of 1 unique documents exhausted:" in out
    assert "withheld" in out
    assert len(ctx.ledger.seen) == 1


def test_search_budget_exhausted_entirely(store):
    ledger = RetrievalLedger(1)
    ledger.admit(["INC-2"])  # consume the whole budget on an unrelated id
    ctx = _context(
        store=store, sparse_index=build_index(store, "sparse"), ledger=ledger
    )
    out = historical_incidents_search_tool("blob error", ctx)
    assert out.startswith("no incidents found")
    assert "exhausted" in out


def test_search_dedup_skips_seen_ids(store):
    ctx = _context(
        store=store,
        sparse_index=build_index(store, "sparse"),
        ledger=RetrievalLedger(10),
        dedup_retrieval=True,
    )
    first = historical_incidents_search_tool("blob error", ctx)
    seen_after_first = set(ctx.ledger.seen)
    second = historical_incidents_search_tool("blob error", ctx)
    assert second == "no incidents found"
    assert ctx.ledger.seen == seen_after_first


def test_search_rerun_without_dedup_is_free(store):
    ctx = _context(
        store=store, sparse_index=build_index(store, "sparse"), ledger=RetrievalLedger(10)
    )
    first = historical_incidents_search_tool("blob error", ctx)
    charged = len(ctx.ledger.seen)
    second = historical_incidents_search_tool("blob error", ctx)
    assert first == second
    assert len(ctx.ledger.seen) == charged


# --- historical retrieval: broad ---------------------------------------------


@pytest.fixture
def dense_ctx(store):
    index = build_index(store, "dense", embedder=HashingEmbedder())
    return _context(store=store, dense_index=index, ledger=RetrievalLedger(10))


def test_br_returns_summary_blocks(dense_ctx):
    out = historical_incidents_br_tool("blob error codes", dense_ctx)
    assert out.startswith("retrieved 3 historical incident(s):")
    assert "root cause:" in out
    assert "id=INC-" in out
    assert len(dense_ctx.ledger.seen) == 3


def test_br_requires_dense_index(store):
    ctx = _context(store=store)
    with pytest.raises(ValueError, match="dense historical index unavailable"):
        historical_incidents_br_tool("q", ctx)


def test_br_truncates_long_incident_summary(store):
    long_summary = " ".join(f"tok{i}" for i in range(600))
    incident = SummarizedIncident(id="INC-0", title="t", summary_description=long_summary)
    ctx = _context(
        incident=incident,
        store=store,
        dense_index=build_index(store, "dense", embedder=HashingEmbedder()),
        query_token_budget=32,
    )
    out = historical_incidents_br_tool("blob", ctx)
    assert "(incident summary truncated to fit the retrieval query budget)" in out


def test_br_includes_discussions_when_enabled(store):
    ctx = _context(
        store=store,
        dense_index=build_index(store, "dense", embedder=HashingEmbedder()),
        include_discussions=True,
    )
    out = historical_incidents_br_tool("blob upload error codes", ctx)
    assert "discussion:" in out


# --- database tools -----------------------------------------------------------


class FakeDatabase:
    def __init__(self, result: TableResult):
        self.result = result
        self.calls = []

    def execute(self, cluster, database, query):
        self.calls.append((cluster, database, query))
        return self.result


SETTINGS = TableResult(
    columns=("tenant", "tenant_count", "region"),
    rows=(
        ("acme", 3, "west"),
        ("beta", 0, "east"),
        ("gamma", 7, "west"),
    ),
)


def _db_input(query="SELECT * FROM settings"):
    return json.dumps({"cluster": "cl-west-7", "database": "fleet", "query": query})


def test_db_query_materializes_handle():
    db = FakeDatabase(SETTINGS)
    ctx = _context(database=db)
    out = db_query_tool(_db_input(), ctx)
    assert out.startswith("table t1: 3 row(s) x 3 column(s)")
    assert "tenant | tenant_count | region" in out
    assert db.calls == [("cl-west-7", "fleet", "SELECT * FROM settings")]
    # a second query gets a fresh handle
    out2 = db_query_tool(_db_input("SELECT tenant FROM settings"), ctx)
    assert out2.startswith("table t2:")


def test_db_query_requires_adapter():
    with pytest.raises(ValueError, match="database environment unavailable"):
        db_query_tool(_db_input(), _context())


def test_db_query_input_validation():
    ctx = _context(database=FakeDatabase(SETTINGS))
    with pytest.raises(ValueError, match="must be a JSON object"):
        db_query_tool("not json", ctx)
    with pytest.raises(ValueError, match="missing field"):
        db_query_tool(json.dumps({"cluster": "c"}), ctx)
    with pytest.raises(ValueError, match="must be a JSON object"):
        db_query_tool(json.dumps(["a", "b"]), ctx)


def test_db_query_truncates_wide_results():
    rows = tuple((f"tenant{i}", i) for i in range(14))
    db = FakeDatabase(TableResult(columns=("tenant", "n"), rows=rows))
    out = db_query_tool(_db_input(), _context(database=db))
    assert "table t1: 14 row(s)" in out
    assert "... truncated (4 more rows)" in out
    assert out.count("tenant1") >= 1
    assert "tenant13" not in out  # row 14 hidden behind the truncation marker


def test_table_qa_executes_model_plan():
    plan = json.dumps([
        {"op": "filter", "column": "tenant_count", "cmp": ">", "value": 0},
        {"op": "aggregate", "fn": "count"},
    ])
    utility = _utility([plan])
    ctx = _context(database=FakeDatabase(SETTINGS), utility=utility)
    db_query_tool(_db_input(), ctx)
    out = table_qa_tool(json.dumps({"table": "t1", "question": "how many tenants?"}), ctx)
    assert out == "2"


def test_table_qa_unknown_handle():
    ctx = _context(utility=_utility(["[]"]))
    with pytest.raises(ValueError, match="unknown table handle 't9'"):
        table_qa_tool(json.dumps({"table": "t9", "question": "q"}), ctx)


def test_table_qa_rejects_unparseable_plan():
    utility = _utility(["not a plan"])
    ctx = _context(database=FakeDatabase(SETTINGS), utility=utility)
    db_query_tool(_db_input(), ctx)
    with pytest.raises(ValueError, match="could not parse transformation plan"):
        table_qa_tool(json.dumps({"table": "t1", "question": "q"}), ctx)


# --- safe plan executor --------------------------------------------------------


def test_execute_plan_filter_sort_head_project():
    plan = [
        {"op": "filter", "column": "region", "cmp": "==", "value": "west"},
        {"op": "sort", "column": "tenant_count", "descending": True},
        {"op": "head", "n": 1},
        {"op": "project", "columns": ["tenant"]},
    ]
    outcome = execute_plan(SETTINGS, plan)
    assert outcome == TableResult(columns=("tenant",), rows=(("gamma",),))
    assert render_answer(outcome) == "gamma"


def test_execute_plan_aggregates():
    assert execute_plan(SETTINGS, [{"op": "aggregate", "fn": "count"}]) == 3
    assert execute_plan(SETTINGS, [{"op": "aggregate", "fn": "sum", "column": "tenant_count"}]) == 10
    assert execute_plan(SETTINGS, [{"op": "aggregate", "fn": "max", "column": "tenant_count"}]) == 7
    assert execute_plan(SETTINGS, [{"op": "aggregate", "fn": "min", "column": "tenant_count"}]) == 0
    avg = execute_plan(SETTINGS, [{"op": "aggregate", "fn": "avg", "column": "tenant_count"}])
    assert avg == pytest.approx(10 / 3)


def test_execute_plan_validates_every_op_before_running_any():
    # the unknown op comes last, but nothing may execute
    plan = [
        {"op": "filter", "column": "region", "cmp": "==", "value": "west"},
        {"op": "purge"},
    ]
    with pytest.raises(ValueError, match="unsupported operation 'purge'"):
        execute_plan(SETTINGS, plan)


def test_execute_plan_aggregate_must_be_final():
    plan = [{"op": "aggregate", "fn": "count"}, {"op": "head", "n": 1}]
    with pytest.raises(ValueError, match="aggregate must be the final operation"):
        execute_plan(SETTINGS, plan)


def test_execute_plan_unknown_column_names_table_columns():
    with pytest.raises(ValueError, match="unknown column 'nope'; table has: tenant, tenant_count, region"):
        execute_plan(SETTINGS, [{"op": "sort", "column": "nope"}])


def test_execute_plan_rejects_non_list_and_bad_ops():
    with pytest.raises(ValueError, match="plan must be a JSON array"):
        execute_plan(SETTINGS, {"op": "head"})
    with pytest.raises(ValueError, match="each operation must be a JSON object"):
        execute_plan(SETTINGS, ["head"])
    with pytest.raises(ValueError, match="unsupported comparator"):
        execute_plan(SETTINGS, [{"op": "filter", "column": "tenant", "cmp": "~", "value": 1}])
    with pytest.raises(ValueError, match="head requires a non-negative integer"):
        execute_plan(SETTINGS, [{"op": "head", "n": -1}])
    with pytest.raises(ValueError, match="no rows to aggregate"):
        execute_plan(
            TableResult(columns=("a",), rows=()),
            [{"op": "aggregate", "fn": "sum", "column": "a"}],
        )


def test_safe_ops_catalog_is_closed():
    assert SAFE_TABLE_OPS == ("filter", "project", "aggregate", "sort", "head")


def test_render_answer_forms():
    assert render_answer(5) == "5"
    assert render_answer(2.5) == "2.5"
    assert render_answer(True) == "true"
    assert render_answer(TableResult(columns=("a",), rows=())) == "(no rows)"
    assert render_answer(TableResult(columns=("a",), rows=((1,), (2,)))) == "1, 2"
    two_col = TableResult(columns=("a", "b"), rows=((1, "x"),))
    assert render_answer(two_col) == "a=1, b=x"


def test_table_result_validation():
    with pytest.raises(ValueError, match="column names must be unique"):
        TableResult(columns=("a", "a"), rows=())
    with pytest.raises(ValueError, match="row width"):
        TableResult(columns=("a", "b"), rows=((1,),))


# --- knowledge base tools -------------------------------------------------------


KBA_DOCS = [
    KBADocument(
        id="KB-1",
        title="fleet settings runbook",
        body=(
            "The fleet_settings database lives on cluster cl-west-7. "
            "Query the settings table to check tenant counts before reboots."
        ),
        linked_incident_types=("settings-drift",),
    ),
    KBADocument(
        id="KB-2",
        title="blob storage triage",
        body="For blob upload failures, inspect the storage frontend rollout history.",
    ),
]


def _kba_store():
    return KbaStore.build(KBA_DOCS, HashingEmbedder())


def test_kba_qa_no_store_message():
    assert kba_qa_tool("where is the db?", _context()) == "no KBA available"


def test_kba_plan_no_store_message():
    out = kba_plan_tool("", _context())
    assert out == "no KBA available; a troubleshooting plan cannot be formed"


def test_kba_qa_empty_question():
    assert kba_qa_tool("  ", _context()) == "provide a question for the knowledge base"


def test_kba_qa_retrieves_chunks_and_answers():
    store = _kba_store()
    utility = _utility(["cluster cl-west-7"])
    ctx = _context(kba_store=store, utility=utility)
    answer = kba_qa_tool("which cluster hosts fleet settings?", ctx)
    assert answer == "cluster cl-west-7"
    assert store.retrieval_count == 1


def test_kba_pinned_article_bypasses_store():
    store = _kba_store()
    pinned = KBA_DOCS[0]
    utility = _utility(["from the pinned article"])
    ctx = _context(kba_store=store, pinned_kba=pinned, utility=utility)
    answer = kba_qa_tool("which cluster?", ctx)
    assert answer == "from the pinned article"
    assert store.retrieval_count == 0


def test_kba_plan_uses_incident_context():
    store = _kba_store()
    utility = _utility(["1. Check rollout history\n2. Compare versions"])
    ctx = _context(kba_store=store, utility=utility)
    plan = kba_plan_tool("", ctx)
    assert plan.startswith("1.")
    assert store.retrieval_count == 1


def test_kba_store_build_rejects_duplicates():
    with pytest.raises(ValueError, match="duplicate KBA id"):
        KbaStore.build([KBA_DOCS[0], KBA_DOCS[0]], HashingEmbedder())


def test_kba_document_requires_body():
    with pytest.raises(ValueError, match="KBA body must be non-empty"):
        KBADocument(id="KB-X", title="t", body="  ")


def test_kba_top_chunks_ranked_and_counted():
    store = _kba_store()
    picked = store.top_chunks("blob upload failures rollout", 1)
    assert len(picked) == 1
    assert picked[0][0].doc_id == "KB-2"
    assert store.retrieval_count == 1
    assert store.top_chunks("anything", 0) == []
    assert store.retrieval_count == 2


# --- human channel ---------------------------------------------------------------


def test_ask_human_empty_request():
    assert ask_human_tool("  ", _context()) == "provide the question to ask"


def test_ask_human_no_channel_times_out():
    ctx = _context(human=None, human_timeout=5.0)
    assert ask_human_tool("which cluster?", ctx) == "no human response within 5 seconds"


def test_ask_human_scripted_answers_in_order():
    human = ScriptedHuman(responses=["cl-west-7", "yes"])
    ctx = _context(human=human, human_timeout=30.0)
    assert ask_human_tool("which cluster?", ctx) == "cl-west-7"
    assert ask_human_tool("confirm?", ctx) == "yes"
    assert ask_human_tool("more?", ctx) == timeout_message(30.0)
    assert human.requests == ["which cluster?", "confirm?", "more?"]


def test_timeout_message_format():
    assert timeout_message(30.0) == "no human response within 30 seconds"
    assert timeout_message(2.5) == "no human response within 2.5 seconds"
