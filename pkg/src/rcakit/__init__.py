"""Root-cause-analysis agent workbench.

Subpackages:
    corpus     incident ingestion, summarization, and the historical corpus store
    retrieval  BM25 and embedding+MMR retrieval over summarized incidents
    gateway    chat-completion backends (remote HTTP and deterministic scripted)
    agent      the ReAct planner loop: prompts, parsing, dispatch, budgets
    tools      general and team-specialized diagnostic tools
    baselines  retrieval baseline, chain-of-thought, and interleaved-retrieval CoT
    evalkit    lexical/semantic metrics, qualitative labels, report rendering
    simenv     deterministic simulated diagnostic environment and scenarios
    service    session service exposing episodes to the operator console
"""

__version__ = "0.1.0"
