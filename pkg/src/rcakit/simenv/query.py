"""The mini query language over simulated tables.

Grammar (keywords case-insensitive):

    SELECT <* | col[, col...]> FROM <table>
        [WHERE <col> <op> <literal> [AND ...]]
        [COUNT]

with operators =, !=, >, >=, <, <= and literals that are numbers, quoted
strings, true/false, or bare identifiers (taken as strings). Every input
either parses or produces a diagnostic error naming the offending token;
those messages are exactly what the planner sees as observations.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..tools.base import TableResult
from .tables import SimTable

_KEYWORDS = {"select", "from", "where", "and", "count"}

_TOKEN_RE = re.compile(
    r"""\s*(?:
      (?P<number>-?\d+(?:\.\d+)?)
    | (?P<string>'[^']*'|"[^"]*")
    | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
    | (?P<op><=|>=|!=|=|<|>)
    | (?P<comma>,)
    | (?P<star>\*)
    | (?P<bad>\S)
    )""",
    re.VERBOSE,
)


class SimQueryError(ValueError):
    """Any query failure: syntax, unknown names, or type mismatches."""


@dataclass(frozen=True)
class Token:
    kind: str
    text: str


@dataclass(frozen=True)
class Predicate:
    column: str
    op: str
    literal: object


@dataclass(frozen=True)
class Query:
    columns: tuple[str, ...] | None  # None means *
    table: str
    predicates: tuple[Predicate, ...]
    count: bool


def _tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    pos = 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        if match is None or match.end() == pos:
            break
        pos = match.end()
        kind = match.lastgroup
        if kind is None:
            continue
        value = match.group(kind)
        if kind == "bad":
            raise SimQueryError(f"unexpected character '{value}'")
        tokens.append(Token(kind, value))
    return tokens


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> Token | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self) -> Token | None:
        token = self.peek()
        if token is not None:
            self.pos += 1
        return token

    def at_keyword(self, word: str) -> bool:
        token = self.peek()
        return (
            token is not None
            and token.kind == "ident"
            and token.text.lower() == word
        )

    def expect_keyword(self, word: str) -> None:
        token = self.take()
        if token is None:
            raise SimQueryError(f"syntax error: expected {word.upper()}, got end of query")
        if token.kind != "ident" or token.text.lower() != word:
            raise SimQueryError(
                f"syntax error: expected {word.upper()}, got '{token.text}'"
            )

    def expect_name(self, what: str) -> str:
        token = self.take()
        if token is None:
            raise SimQueryError(f"syntax error: expected {what}, got end of query")
        if token.kind != "ident" or token.text.lower() in _KEYWORDS:
            raise SimQueryError(f"syntax error: expected {what}, got '{token.text}'")
        return token.text


def _literal_value(token: Token):
    if token.kind == "number":
        return float(token.text) if "." in token.text else int(token.text)
    if token.kind == "string":
        return token.text[1:-1]
    if token.kind == "ident":
        lowered = token.text.lower()
        if lowered == "true":
            return True
        if lowered == "false":
            return False
        if lowered in _KEYWORDS:
            raise SimQueryError(f"syntax error: expected a literal, got '{token.text}'")
        return token.text
    raise SimQueryError(f"syntax error: expected a literal, got '{token.text}'")


def parse_query(text: str) -> Query:
    parser = _Parser(_tokenize(text))
    parser.expect_keyword("select")

    columns: tuple[str, ...] | None
    if parser.peek() is not None and parser.peek().kind == "star":
        parser.take()
        columns = None
    else:
        names = [parser.expect_name("a column name")]
        while parser.peek() is not None and parser.peek().kind == "comma":
            parser.take()
            names.append(parser.expect_name("a column name"))
        columns = tuple(names)

    parser.expect_keyword("from")
    table = parser.expect_name("a table name")

    predicates: list[Predicate] = []
    if parser.at_keyword("where"):
        parser.take()
        while True:
            column = parser.expect_name("a column name")
            op_token = parser.take()
            if op_token is None or op_token.kind != "op":
                got = "end of query" if op_token is None else f"'{op_token.text}'"
                raise SimQueryError(f"syntax error: expected an operator, got {got}")
            literal_token = parser.take()
            if literal_token is None:
                raise SimQueryError("syntax error: expected a literal, got end of query")
            predicates.append(
                Predicate(column, op_token.text, _literal_value(literal_token))
            )
            if parser.at_keyword("and"):
                parser.take()
                continue
            break

    count = False
    if parser.at_keyword("count"):
        parser.take()
        count = True

    trailing = parser.peek()
    if trailing is not None:
        raise SimQueryError(f"unexpected trailing token '{trailing.text}'")
    return Query(columns=columns, table=table, predicates=tuple(predicates), count=count)


def _match(predicate: Predicate, value) -> bool:
    op = predicate.op
    literal = predicate.literal
    if op == "=":
        return value == literal
    if op == "!=":
        return value != literal
    try:
        if op == ">":
            return value > literal
        if op == ">=":
            return value >= literal
        if op == "<":
            return value < literal
        return value <= literal
    except TypeError:
        raise SimQueryError(
            f"type mismatch comparing column '{predicate.column}' with {literal!r}"
        ) from None


def execute_query(tables: dict[str, SimTable], text: str) -> TableResult:
    """Parse and run a query against one database's tables."""
    query = parse_query(text)
    table = tables.get(query.table)
    if table is None:
        raise SimQueryError(f"unknown table '{query.table}'")

    names = table.column_names
    for predicate in query.predicates:
        if predicate.column not in names:
            raise SimQueryError(f"unknown column '{predicate.column}'")
    selected = names if query.columns is None else query.columns
    for column in selected:
        if column not in names:
            raise SimQueryError(f"unknown column '{column}'")

    index = {name: i for i, name in enumerate(names)}
    rows = [
        row
        for row in table.rows
        if all(_match(p, row[index[p.column]]) for p in query.predicates)
    ]
    if query.count:
        return TableResult(columns=("count",), rows=((len(rows),),))
    picked = tuple(index[c] for c in selected)
    return TableResult(
        columns=tuple(selected),
        rows=tuple(tuple(row[i] for i in picked) for row in rows),
    )
