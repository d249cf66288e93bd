"""Standard toolset assemblies for the two retrieval variants and case study."""

from __future__ import annotations

from .base import Tool, Toolset
from .database import db_query_tool, table_qa_tool
from .general import (
    historical_incidents_br_tool,
    historical_incidents_qa_tool,
    historical_incidents_search_tool,
    incident_details_qa_tool,
)
from .human import ask_human_tool
from .kba import kba_plan_tool, kba_qa_tool

VARIANTS = ("br", "sq")


def general_tools(variant: str = "br") -> list[Tool]:
    """Incident Q/A plus one historical-retrieval style: broad or search+Q/A."""
    if variant == "br":
        return [incident_details_qa_tool, historical_incidents_br_tool]
    if variant == "sq":
        return [
            incident_details_qa_tool,
            historical_incidents_search_tool,
            historical_incidents_qa_tool,
        ]
    raise ValueError(f"unknown toolset variant {variant!r}; expected one of {VARIANTS}")


def case_study_tools() -> list[Tool]:
    return [db_query_tool, table_qa_tool, kba_qa_tool, kba_plan_tool, ask_human_tool]


def build_toolset(
    variant: str | None = "br", *, include_case_study: bool = False
) -> Toolset:
    tools: list[Tool] = []
    if variant is not None:
        tools.extend(general_tools(variant))
    if include_case_study:
        tools.extend(case_study_tools())
    return Toolset(tools)
