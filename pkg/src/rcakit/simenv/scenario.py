"""Scenario files: schema, validation, and database materialization.

A scenario is one YAML document carrying the incident, KBA fixtures, typed
tables with named row fixtures, scripted planner/utility/human lines, and
outcome match rules. Validation errors always name the offending path.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import yaml

from ..corpus.records import IncidentRecord
from ..tools.kba import KBADocument
from .tables import SimColumn, SimTable


class ScenarioError(ValueError):
    def __init__(self, path: str, reason: str):
        self.path = path
        self.reason = reason
        super().__init__(f"{path}: {reason}")


@dataclass(frozen=True)
class ToolCallRule:
    tool: str
    table: str = ""
    input_contains: str = ""
    min_count: int = 1


@dataclass(frozen=True)
class MatchRules:
    phrases: tuple[str, ...] = ()
    forbidden_phrases: tuple[str, ...] = ()
    tool_calls: tuple[ToolCallRule, ...] = ()

    @property
    def empty(self) -> bool:
        return not (self.phrases or self.forbidden_phrases or self.tool_calls)


@dataclass(frozen=True)
class Outcome:
    id: str
    description: str
    rules: MatchRules


@dataclass(frozen=True)
class SimTableSpec:
    name: str
    columns: tuple[SimColumn, ...]
    fixtures: dict[str, tuple[tuple, ...]]

    def rows_for(self, fixture: str) -> tuple[tuple, ...]:
        if fixture in self.fixtures:
            return self.fixtures[fixture]
        if "default" in self.fixtures:
            return self.fixtures["default"]
        raise KeyError(fixture)


@dataclass(frozen=True)
class ScenarioScript:
    name: str
    fixture: str = "default"
    planner: tuple[str, ...] = ()
    utility: tuple[str, ...] = ()
    human: tuple[str, ...] = ()
    repeat: bool = False


@dataclass
class Scenario:
    id: str
    incident: IncidentRecord
    kbas: list[KBADocument] = field(default_factory=list)
    pinned_kba: str | None = None
    databases: dict[str, dict[str, dict[str, SimTableSpec]]] = field(
        default_factory=dict
    )
    outcomes: list[Outcome] = field(default_factory=list)
    scripts: dict[str, ScenarioScript] = field(default_factory=dict)

    def table_names(self) -> set[str]:
        names: set[str] = set()
        for clusters in self.databases.values():
            for tables in clusters.values():
                names.update(tables)
        return names

    def outcome(self, outcome_id: str) -> Outcome:
        for outcome in self.outcomes:
            if outcome.id == outcome_id:
                return outcome
        raise KeyError(outcome_id)


def _require(mapping: dict, key: str, path: str):
    if not isinstance(mapping, dict):
        raise ScenarioError(path, "expected a mapping")
    if key not in mapping:
        raise ScenarioError(path, f"missing required field '{key}'")
    return mapping[key]


def _str_list(value, path: str) -> tuple[str, ...]:
    if value is None:
        return ()
    if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
        raise ScenarioError(path, "expected a list of strings")
    return tuple(value)


def _parse_incident(raw, path: str) -> IncidentRecord:
    incident_id = str(_require(raw, "id", path))
    title = str(_require(raw, "title", path))
    description = str(raw.get("description") or "")
    root_cause = raw.get("root_cause")
    try:
        return IncidentRecord(
            id=incident_id,
            title=title,
            description=description,
            root_cause=None if root_cause is None else str(root_cause),
        )
    except ValueError as exc:
        raise ScenarioError(path, str(exc)) from exc


def _parse_kba(raw, path: str) -> KBADocument:
    try:
        return KBADocument(
            id=str(_require(raw, "id", path)),
            title=str(_require(raw, "title", path)),
            body=str(_require(raw, "body", path)),
            linked_incident_types=_str_list(
                raw.get("linked_incident_types"), f"{path}.linked_incident_types"
            ),
        )
    except ValueError as exc:
        if isinstance(exc, ScenarioError):
            raise
        raise ScenarioError(path, str(exc)) from exc


def _parse_table(name: str, raw, path: str) -> SimTableSpec:
    columns_raw = _require(raw, "columns", path)
    if not isinstance(columns_raw, list) or not columns_raw:
        raise ScenarioError(f"{path}.columns", "expected a non-empty list")
    columns = []
    for i, col in enumerate(columns_raw):
        col_path = f"{path}.columns[{i}]"
        try:
            columns.append(
                SimColumn(
                    name=str(_require(col, "name", col_path)),
                    type=str(_require(col, "type", col_path)),
                )
            )
        except ValueError as exc:
            if isinstance(exc, ScenarioError):
                raise
            raise ScenarioError(col_path, str(exc)) from exc
    fixtures_raw = _require(raw, "fixtures", path)
    if not isinstance(fixtures_raw, dict) or not fixtures_raw:
        raise ScenarioError(f"{path}.fixtures", "expected a non-empty mapping")
    fixtures: dict[str, tuple[tuple, ...]] = {}
    for fixture_name, rows in fixtures_raw.items():
        fixture_path = f"{path}.fixtures.{fixture_name}"
        if rows is None:
            rows = []
        if not isinstance(rows, list):
            raise ScenarioError(fixture_path, "expected a list of rows")
        normalized = tuple(
            tuple(row) if isinstance(row, list) else (row,) for row in rows
        )
        try:
            SimTable(name=name, columns=tuple(columns), rows=normalized)
        except ValueError as exc:
            raise ScenarioError(fixture_path, str(exc)) from exc
        fixtures[str(fixture_name)] = normalized
    return SimTableSpec(name=name, columns=tuple(columns), fixtures=fixtures)


def _parse_outcome(raw, path: str, table_names: set[str]) -> Outcome:
    outcome_id = str(_require(raw, "id", path))
    rules_raw = _require(raw, "match_rules", path)
    rules_path = f"{path}.match_rules"
    tool_calls = []
    for i, call in enumerate(rules_raw.get("tool_calls") or []):
        call_path = f"{rules_path}.tool_calls[{i}]"
        tool = str(_require(call, "tool", call_path))
        table = str(call.get("table") or "")
        if table and table not in table_names:
            raise ScenarioError(f"{call_path}.table", f"unknown table '{table}'")
        min_count = call.get("min_count", 1)
        if not isinstance(min_count, int) or min_count < 1:
            raise ScenarioError(f"{call_path}.min_count", "expected an integer >= 1")
        tool_calls.append(
            ToolCallRule(
                tool=tool,
                table=table,
                input_contains=str(call.get("input_contains") or ""),
                min_count=min_count,
            )
        )
    rules = MatchRules(
        phrases=_str_list(rules_raw.get("phrases"), f"{rules_path}.phrases"),
        forbidden_phrases=_str_list(
            rules_raw.get("forbidden_phrases"), f"{rules_path}.forbidden_phrases"
        ),
        tool_calls=tuple(tool_calls),
    )
    if rules.empty:
        raise ScenarioError(rules_path, "match_rules must not be empty")
    return Outcome(
        id=outcome_id, description=str(raw.get("description") or ""), rules=rules
    )


def _parse_script(name: str, raw, path: str) -> ScenarioScript:
    if raw is None:
        raw = {}
    repeat = raw.get("repeat", False)
    if not isinstance(repeat, bool):
        raise ScenarioError(f"{path}.repeat", "expected a boolean")
    return ScenarioScript(
        name=name,
        fixture=str(raw.get("fixture") or "default"),
        planner=_str_list(raw.get("planner"), f"{path}.planner"),
        utility=_str_list(raw.get("utility"), f"{path}.utility"),
        human=_str_list(raw.get("human"), f"{path}.human"),
        repeat=repeat,
    )


def load_scenario_text(text: str) -> Scenario:
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ScenarioError("$", f"not valid YAML: {exc}") from exc
    if not isinstance(raw, dict):
        raise ScenarioError("$", "expected a mapping at the top level")

    scenario_id = str(_require(raw, "id", "$"))
    incident = _parse_incident(_require(raw, "incident", "incident"), "incident")

    kbas = []
    seen_kba_ids: set[str] = set()
    for i, kba_raw in enumerate(raw.get("kbas") or []):
        kba = _parse_kba(kba_raw, f"kbas[{i}]")
        if kba.id in seen_kba_ids:
            raise ScenarioError(f"kbas[{i}].id", f"duplicate KBA id '{kba.id}'")
        seen_kba_ids.add(kba.id)
        kbas.append(kba)

    pinned = raw.get("pinned_kba")
    if pinned is not None:
        pinned = str(pinned)
        if pinned not in seen_kba_ids:
            raise ScenarioError("pinned_kba", f"unknown KBA '{pinned}'")

    databases: dict[str, dict[str, dict[str, SimTableSpec]]] = {}
    for cluster, dbs in (raw.get("databases") or {}).items():
        databases[str(cluster)] = {}
        if not isinstance(dbs, dict):
            raise ScenarioError(f"databases.{cluster}", "expected a mapping")
        for db_name, tables in dbs.items():
            databases[str(cluster)][str(db_name)] = {}
            if not isinstance(tables, dict):
                raise ScenarioError(
                    f"databases.{cluster}.{db_name}", "expected a mapping"
                )
            for table_name, table_raw in tables.items():
                spec = _parse_table(
                    str(table_name),
                    table_raw,
                    f"databases.{cluster}.{db_name}.{table_name}",
                )
                databases[str(cluster)][str(db_name)][str(table_name)] = spec

    table_names = {
        name
        for clusters in databases.values()
        for tables in clusters.values()
        for name in tables
    }

    outcomes = []
    seen_outcomes: set[str] = set()
    for i, outcome_raw in enumerate(raw.get("outcomes") or []):
        outcome = _parse_outcome(outcome_raw, f"outcomes[{i}]", table_names)
        if outcome.id in seen_outcomes:
            raise ScenarioError(f"outcomes[{i}].id", f"duplicate outcome '{outcome.id}'")
        seen_outcomes.add(outcome.id)
        outcomes.append(outcome)

    scripts: dict[str, ScenarioScript] = {}
    for script_name, script_raw in (raw.get("scripts") or {}).items():
        script = _parse_script(str(script_name), script_raw, f"scripts.{script_name}")
        for cluster, dbs in databases.items():
            for db_name, tables in dbs.items():
                for table_name, spec in tables.items():
                    try:
                        spec.rows_for(script.fixture)
                    except KeyError:
                        raise ScenarioError(
                            f"scripts.{script_name}.fixture",
                            f"table '{table_name}' has no fixture "
                            f"'{script.fixture}' and no default",
                        ) from None
        scripts[str(script_name)] = script

    return Scenario(
        id=scenario_id,
        incident=incident,
        kbas=kbas,
        pinned_kba=pinned,
        databases=databases,
        outcomes=outcomes,
        scripts=scripts,
    )


def load_scenario(path: str | Path) -> Scenario:
    return load_scenario_text(Path(path).read_text(encoding="utf-8"))


def build_database(
    scenario: Scenario, fixture: str
) -> dict[str, dict[str, dict[str, SimTable]]]:
    """Materialize every table with the named row fixture."""
    built: dict[str, dict[str, dict[str, SimTable]]] = {}
    for cluster, dbs in scenario.databases.items():
        built[cluster] = {}
        for db_name, tables in dbs.items():
            built[cluster][db_name] = {}
            for table_name, spec in tables.items():
                built[cluster][db_name][table_name] = SimTable(
                    name=table_name,
                    columns=spec.columns,
                    rows=spec.rows_for(fixture),
                )
    return built
