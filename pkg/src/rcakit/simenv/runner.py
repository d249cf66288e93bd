"""Run a scenario script end to end: build the toolset, drive the episode
with scripted backends, and judge the result."""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from ..agent.budget import RetrievalLedger
from ..agent.loop import EpisodeHooks, run_episode
from ..agent.types import AgentConfig, Trajectory
from ..corpus.records import SummarizedIncident
from ..gateway.core import LlmSession
from ..gateway.scripted import ScriptedBackend
from ..retrieval.base import Embedder, HashingEmbedder
from ..tools.base import TableResult, ToolContext, Toolset
from ..tools.general import incident_details_qa_tool
from ..tools.human import ScriptedHuman
from ..tools.kba import KbaStore
from ..tools.registry import case_study_tools
from .judge import Judgment, judge_outcome
from .query import SimQueryError, execute_query
from .scenario import Scenario, ScenarioScript, build_database
from .tables import SimTable


class SimDatabaseAdapter:
    """The (cluster, database, query) adapter over materialized sim tables."""

    def __init__(self, databases: dict[str, dict[str, dict[str, SimTable]]]):
        self._databases = databases

    def execute(self, cluster: str, database: str, query: str) -> TableResult:
        clusters = self._databases
        if cluster not in clusters:
            raise SimQueryError(f"unknown cluster '{cluster}'")
        if database not in clusters[cluster]:
            raise SimQueryError(f"unknown database '{database}'")
        return execute_query(clusters[cluster][database], query)


@dataclass
class ScenarioRun:
    scenario_id: str
    script_name: str
    trajectory: Trajectory
    judgment: Judgment


def scenario_toolset() -> Toolset:
    return Toolset([incident_details_qa_tool, *case_study_tools()])


def build_scenario_context(
    scenario: Scenario,
    script: ScenarioScript,
    config: AgentConfig,
    *,
    embedder: Embedder | None = None,
) -> ToolContext:
    embedder = embedder or HashingEmbedder()
    kba_store = KbaStore.build(list(scenario.kbas), embedder)
    pinned = None
    if scenario.pinned_kba is not None:
        pinned = next(k for k in scenario.kbas if k.id == scenario.pinned_kba)
    utility = LlmSession(
        ScriptedBackend(list(script.utility), repeat=script.repeat)
    )
    incident = scenario.incident
    summarized = SummarizedIncident(
        id=incident.id,
        title=incident.title,
        summary_description=incident.description,
    )
    return ToolContext(
        incident=summarized,
        raw_incident=incident,
        utility=utility,
        ledger=RetrievalLedger(config.retrieval.total_budget),
        database=SimDatabaseAdapter(build_database(scenario, script.fixture)),
        kba_store=kba_store,
        pinned_kba=pinned,
        human=ScriptedHuman(list(script.human)),
        human_timeout=config.human_timeout,
        retrieval_k=config.retrieval.k,
        mmr_lambda=config.retrieval.mmr_lambda,
    )


def run_scenario(
    scenario: Scenario,
    script_name: str,
    *,
    config: AgentConfig | None = None,
    embedder: Embedder | None = None,
    hooks: EpisodeHooks | None = None,
    context: ToolContext | None = None,
) -> ScenarioRun:
    if script_name not in scenario.scripts:
        available = ", ".join(sorted(scenario.scripts))
        raise KeyError(f"unknown script '{script_name}'; available: {available}")
    script = scenario.scripts[script_name]
    config = config or AgentConfig()
    context = context or build_scenario_context(
        scenario, script, config, embedder=embedder
    )
    planner = LlmSession(ScriptedBackend(list(script.planner), repeat=script.repeat))
    trajectory = run_episode(
        context.incident,
        scenario_toolset(),
        config,
        planner,
        context=context,
        model_tag=f"scenario:{scenario.id}:{script_name}",
        hooks=hooks,
    )
    return ScenarioRun(
        scenario_id=scenario.id,
        script_name=script_name,
        trajectory=trajectory,
        judgment=judge_outcome(scenario, trajectory),
    )


def shipped_scenario_path(name: str) -> Path:
    """Path of a scenario shipped with the package (by stem, e.g. setting_drift)."""
    root = resources.files("rcakit.simenv") / "data"
    path = Path(str(root / f"{name}.yaml"))
    if not path.exists():
        shipped = sorted(p.stem for p in Path(str(root)).glob("*.yaml"))
        raise FileNotFoundError(
            f"no shipped scenario '{name}'; available: {', '.join(shipped)}"
        )
    return path
