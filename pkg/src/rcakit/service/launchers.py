"""Episode launchers: how a session turns (incident, mode) into a running
episode. The scenario launcher serves scripted diagnostic scenarios; the
corpus launcher serves live episodes over an ingested incident corpus."""

from __future__ import annotations

from ..agent.budget import RetrievalLedger
from ..agent.loop import EpisodeHooks, run_episode
from ..agent.types import AgentConfig, Trajectory
from ..corpus.store import CorpusStore
from ..gateway.http import GatewayConfig, make_sessions
from ..retrieval.base import Embedder
from ..retrieval.index import RetrievalIndex
from ..simenv.runner import build_scenario_context, run_scenario
from ..simenv.scenario import Scenario
from ..tools.base import ToolContext
from ..tools.registry import build_toolset
from .sessions import SessionHumanChannel

REACT_MODES = ("react-br", "react-sq")


class ScenarioLauncher:
    """Sessions over a scripted scenario: the incident is the scenario's
    incident and the mode names one of its scripts."""

    def __init__(self, scenario: Scenario, *, embedder: Embedder | None = None):
        self._scenario = scenario
        self._embedder = embedder

    @property
    def scenario(self) -> Scenario:
        return self._scenario

    def incident_exists(self, incident_id: str) -> bool:
        return incident_id == self._scenario.incident.id

    def incident_ids(self) -> tuple[str, ...]:
        return (self._scenario.incident.id,)

    def mode_exists(self, mode: str) -> bool:
        return mode in self._scenario.scripts

    def modes(self) -> tuple[str, ...]:
        return tuple(sorted(self._scenario.scripts))

    def launch(
        self,
        incident_id: str,
        mode: str,
        config: AgentConfig,
        hooks: EpisodeHooks,
        human: SessionHumanChannel,
    ) -> Trajectory:
        script = self._scenario.scripts[mode]
        context = build_scenario_context(
            self._scenario, script, config, embedder=self._embedder
        )
        if human is not None:
            context.human = human
        run = run_scenario(
            self._scenario, mode, config=config, hooks=hooks, context=context
        )
        return run.trajectory


class CorpusLauncher:
    """Sessions over an ingested corpus: retrieval-tool episodes against a
    remote chat backend."""

    def __init__(
        self,
        store: CorpusStore,
        gateway_config: GatewayConfig,
        *,
        sparse_index: RetrievalIndex | None = None,
        dense_index: RetrievalIndex | None = None,
        include_discussions: bool = False,
    ):
        self._store = store
        self._gateway_config = gateway_config
        self._sparse_index = sparse_index
        self._dense_index = dense_index
        self._include_discussions = include_discussions

    def incident_exists(self, incident_id: str) -> bool:
        return incident_id in self._store.summaries()

    def incident_ids(self) -> tuple[str, ...]:
        return tuple(sorted(self._store.summaries()))

    def mode_exists(self, mode: str) -> bool:
        return mode in REACT_MODES

    def modes(self) -> tuple[str, ...]:
        return REACT_MODES

    def launch(
        self,
        incident_id: str,
        mode: str,
        config: AgentConfig,
        hooks: EpisodeHooks,
        human: SessionHumanChannel,
    ) -> Trajectory:
        variant = "br" if mode == "react-br" else "sq"
        planner, utility = make_sessions(self._gateway_config)
        incident = self._store.get_summary(incident_id)
        records = self._store.records()
        context = ToolContext(
            incident=incident,
            raw_incident=records.get(incident_id),
            utility=utility,
            ledger=RetrievalLedger(config.retrieval.total_budget),
            store=self._store,
            sparse_index=self._sparse_index,
            dense_index=self._dense_index,
            human=human,
            human_timeout=config.human_timeout,
            include_discussions=self._include_discussions,
            retrieval_k=config.retrieval.k,
            mmr_lambda=config.retrieval.mmr_lambda,
        )
        return run_episode(
            incident,
            build_toolset(variant),
            config,
            planner,
            context=context,
            model_tag=mode,
            hooks=hooks,
        )
