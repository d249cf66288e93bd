from .ingest import IngestReport, ingest_incidents
from .records import (
    AUTHOR_ROLES,
    CorpusSplit,
    DiscussionComment,
    IncidentRecord,
    SummarizedIncident,
    parse_record_line,
    record_to_line,
    summary_from_dict,
    summary_to_dict,
)
from .store import CorpusStore, assign_splits
from .summarize import (
    SummarizationError,
    Summarizer,
    SummarizerConfig,
    chunk_comments,
    filter_comments,
)

__all__ = [
    "AUTHOR_ROLES",
    "CorpusSplit",
    "CorpusStore",
    "DiscussionComment",
    "IncidentRecord",
    "IngestReport",
    "SummarizationError",
    "SummarizedIncident",
    "Summarizer",
    "SummarizerConfig",
    "assign_splits",
    "chunk_comments",
    "filter_comments",
    "ingest_incidents",
    "parse_record_line",
    "record_to_line",
    "summary_from_dict",
    "summary_to_dict",
]
