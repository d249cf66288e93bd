"""Database tools: run a query into a table handle, then analyze the table.

Analysis never executes model-written code: the utility model emits a plan as
a JSON list of operations drawn from a fixed safe set, a sandboxed executor
applies them, and the final answer is rendered deterministically from the
executed result.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from ..gateway.core import ChatMessage, ChatRequest
from .base import TableResult, Tool, ToolContext, ToolDescriptor

SAFE_TABLE_OPS = ("filter", "project", "aggregate", "sort", "head")
_COMPARATORS = ("==", "!=", ">", ">=", "<", "<=")
_AGG_FNS = ("count", "sum", "avg", "min", "max")
_MAX_OBSERVATION_ROWS = 10
_TABLES_KEY = "tables"
_SEQ_KEY = "table_seq"


@dataclass(frozen=True)
class TableHandle:
    id: str
    columns: tuple[str, ...]
    row_count: int
    provenance: tuple[str, str, str]  # (cluster, database, query text)

    def __post_init__(self) -> None:
        if len(set(self.columns)) != len(self.columns):
            raise ValueError("column names must be unique")


def _fmt_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:g}"
    return str(value)


def _render_rows(result: TableResult, limit: int = _MAX_OBSERVATION_ROWS) -> str:
    lines = [" | ".join(result.columns)]
    for row in result.rows[:limit]:
        lines.append(" | ".join(_fmt_value(v) for v in row))
    hidden = len(result.rows) - limit
    if hidden > 0:
        lines.append(f"... truncated ({hidden} more rows)")
    return "\n".join(lines)


def _parse_json_object(action_input: str, fields: tuple[str, ...]) -> dict:
    try:
        payload = json.loads(action_input)
    except json.JSONDecodeError as exc:
        raise ValueError(
            "action input must be a JSON object with fields "
            f"{', '.join(fields)} (parse error: {exc.msg})"
        ) from exc
    if not isinstance(payload, dict):
        raise ValueError(
            f"action input must be a JSON object with fields {', '.join(fields)}"
        )
    missing = [f for f in fields if f not in payload]
    if missing:
        raise ValueError(f"missing field(s) in action input: {', '.join(missing)}")
    return payload


# -- db_query ----------------------------------------------------------------


def _db_query(action_input: str, ctx: ToolContext) -> str:
    payload = _parse_json_object(action_input, ("cluster", "database", "query"))
    if ctx.database is None:
        raise ValueError("database environment unavailable")
    cluster = str(payload["cluster"])
    database = str(payload["database"])
    query = str(payload["query"])
    result = ctx.database.execute(cluster, database, query)

    seq = ctx.scratch.get(_SEQ_KEY, 0) + 1
    ctx.scratch[_SEQ_KEY] = seq
    handle = TableHandle(
        id=f"t{seq}",
        columns=result.columns,
        row_count=len(result.rows),
        provenance=(cluster, database, query),
    )
    ctx.scratch.setdefault(_TABLES_KEY, {})[handle.id] = (handle, result)
    header = (
        f"table {handle.id}: {handle.row_count} row(s) x "
        f"{len(handle.columns)} column(s)"
    )
    return f"{header}\n{_render_rows(result)}"


db_query_tool = Tool(
    descriptor=ToolDescriptor(
        name="db_query",
        description=(
            "Run a query against a database on a cluster; the result is "
            "materialized as a table handle for later analysis."
        ),
        input_schema={"cluster": "text", "database": "text", "query": "text"},
    ),
    fn=_db_query,
)


# -- table_qa ----------------------------------------------------------------


def _column_index(result: TableResult, name: str) -> int:
    if name not in result.columns:
        available = ", ".join(result.columns)
        raise ValueError(f"unknown column {name!r}; table has: {available}")
    return result.columns.index(name)


def _apply_filter(result: TableResult, op: dict) -> TableResult:
    idx = _column_index(result, str(op.get("column")))
    cmp = op.get("cmp")
    if cmp not in _COMPARATORS:
        raise ValueError(f"unsupported comparator {cmp!r}; allowed: {', '.join(_COMPARATORS)}")
    value = op.get("value")

    def keep(row) -> bool:
        cell = row[idx]
        try:
            if cmp == "==":
                return cell == value
            if cmp == "!=":
                return cell != value
            if cmp == ">":
                return cell > value
            if cmp == ">=":
                return cell >= value
            if cmp == "<":
                return cell < value
            return cell <= value
        except TypeError as exc:
            raise ValueError(
                f"cannot compare column {op['column']!r} values with {value!r}"
            ) from exc

    return TableResult(result.columns, tuple(r for r in result.rows if keep(r)))


def _apply_project(result: TableResult, op: dict) -> TableResult:
    columns = op.get("columns")
    if not isinstance(columns, list) or not columns:
        raise ValueError("project requires a non-empty column list")
    indexes = [_column_index(result, str(c)) for c in columns]
    return TableResult(
        tuple(str(c) for c in columns),
        tuple(tuple(row[i] for i in indexes) for row in result.rows),
    )


def _apply_sort(result: TableResult, op: dict) -> TableResult:
    idx = _column_index(result, str(op.get("column")))
    descending = bool(op.get("descending", False))
    try:
        rows = tuple(sorted(result.rows, key=lambda r: r[idx], reverse=descending))
    except TypeError as exc:
        raise ValueError(f"cannot sort column {op['column']!r}") from exc
    return TableResult(result.columns, rows)


def _apply_head(result: TableResult, op: dict) -> TableResult:
    n = op.get("n")
    if not isinstance(n, int) or n < 0:
        raise ValueError("head requires a non-negative integer n")
    return TableResult(result.columns, result.rows[:n])


def _apply_aggregate(result: TableResult, op: dict):
    fn = op.get("fn")
    if fn not in _AGG_FNS:
        raise ValueError(f"unsupported aggregate {fn!r}; allowed: {', '.join(_AGG_FNS)}")
    if fn == "count":
        return len(result.rows)
    idx = _column_index(result, str(op.get("column")))
    values = [row[idx] for row in result.rows]
    if not values:
        raise ValueError(f"no rows to aggregate with {fn}")
    if fn == "sum":
        return sum(values)
    if fn == "avg":
        return sum(values) / len(values)
    if fn == "min":
        return min(values)
    return max(values)


def execute_plan(result: TableResult, plan: list[dict]):
    """Apply a validated operation plan; returns a TableResult or a scalar."""
    if not isinstance(plan, list):
        raise ValueError("plan must be a JSON array of operations")
    for op in plan:
        if not isinstance(op, dict):
            raise ValueError("each operation must be a JSON object")
        name = op.get("op")
        if name not in SAFE_TABLE_OPS:
            raise ValueError(
                f"unsupported operation {name!r}; allowed: {', '.join(SAFE_TABLE_OPS)}"
            )
    current = result
    for position, op in enumerate(plan):
        if not isinstance(current, TableResult):
            raise ValueError("aggregate must be the final operation")
        name = op["op"]
        if name == "filter":
            current = _apply_filter(current, op)
        elif name == "project":
            current = _apply_project(current, op)
        elif name == "sort":
            current = _apply_sort(current, op)
        elif name == "head":
            current = _apply_head(current, op)
        else:
            current = _apply_aggregate(current, op)
    return current


def render_answer(outcome) -> str:
    """Deterministic rendering of an executed plan's outcome."""
    if not isinstance(outcome, TableResult):
        return _fmt_value(outcome)
    if not outcome.rows:
        return "(no rows)"
    if len(outcome.columns) == 1:
        return ", ".join(_fmt_value(row[0]) for row in outcome.rows)
    lines = []
    for row in outcome.rows:
        lines.append(
            ", ".join(
                f"{col}={_fmt_value(val)}" for col, val in zip(outcome.columns, row)
            )
        )
    return "\n".join(lines)


_PLAN_SYSTEM = (
    "You plan table analysis. Reply with only a JSON array of operation "
    "objects, no prose."
)

_PLAN_OPERATIONS_DOC = """\
Allowed operations:
- {"op": "filter", "column": <name>, "cmp": "=="|"!="|">"|">="|"<"|"<=", "value": <literal>}
- {"op": "project", "columns": [<name>, ...]}
- {"op": "sort", "column": <name>, "descending": true|false}
- {"op": "head", "n": <count>}
- {"op": "aggregate", "fn": "count"|"sum"|"avg"|"min"|"max", "column": <name; omit for count>}"""


def _table_qa(action_input: str, ctx: ToolContext) -> str:
    payload = _parse_json_object(action_input, ("table", "question"))
    table_id = str(payload["table"])
    question = str(payload["question"])
    tables = ctx.scratch.get(_TABLES_KEY, {})
    if table_id not in tables:
        raise ValueError(
            f"unknown table handle {table_id!r}; run a database query first"
        )
    handle, result = tables[table_id]
    if ctx.utility is None:
        raise ValueError("utility model unavailable")
    user = (
        f"Table columns: {', '.join(handle.columns)}. "
        f"Row count: {handle.row_count}.\n"
        f"Question: {question}\n{_PLAN_OPERATIONS_DOC}\n"
        "Plan the minimal operation list that answers the question."
    )
    request = ChatRequest(
        messages=[
            ChatMessage(role="system", content=_PLAN_SYSTEM),
            ChatMessage(role="user", content=user),
        ],
        max_tokens=512,
    )
    plan_text = ctx.utility.complete(request).text.strip()
    try:
        plan = json.loads(plan_text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"could not parse transformation plan: {exc.msg}") from exc
    outcome = execute_plan(result, plan)
    return render_answer(outcome)


table_qa_tool = Tool(
    descriptor=ToolDescriptor(
        name="table_qa",
        description=(
            "Ask a question about a previously materialized table; the answer "
            "is computed by filtering, projecting, sorting, or aggregating it."
        ),
        input_schema={"table": "table handle id", "question": "text"},
    ),
    fn=_table_qa,
)
