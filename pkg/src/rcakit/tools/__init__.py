"""The planner's tool suite: incident Q/A, historical retrieval, database
queries, table analysis, knowledge-base lookup, and human interaction."""

from .base import (
    DatabaseAdapter,
    TableResult,
    Tool,
    ToolContext,
    ToolDescriptor,
    Toolset,
)
from .database import SAFE_TABLE_OPS, TableHandle, db_query_tool, table_qa_tool
from .general import (
    historical_incidents_br_tool,
    historical_incidents_qa_tool,
    historical_incidents_search_tool,
    incident_details_qa_tool,
)
from .human import HumanChannel, ScriptedHuman, ask_human_tool
from .kba import KBADocument, KbaStore, kba_plan_tool, kba_qa_tool
from .registry import build_toolset, case_study_tools, general_tools

__all__ = [
    "DatabaseAdapter",
    "HumanChannel",
    "KBADocument",
    "KbaStore",
    "SAFE_TABLE_OPS",
    "ScriptedHuman",
    "TableHandle",
    "TableResult",
    "Tool",
    "ToolContext",
    "ToolDescriptor",
    "Toolset",
    "ask_human_tool",
    "build_toolset",
    "case_study_tools",
    "db_query_tool",
    "general_tools",
    "historical_incidents_br_tool",
    "historical_incidents_qa_tool",
    "historical_incidents_search_tool",
    "incident_details_qa_tool",
    "kba_plan_tool",
    "kba_qa_tool",
    "table_qa_tool",
]
