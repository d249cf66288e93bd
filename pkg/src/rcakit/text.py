"""Shared text utilities: the workbench tokenizer and token-budget helpers.

One tokenizer is used everywhere a token count matters (comment filtering,
summary budgets, BM25, the hashing embedder, the lexical metrics) so that
budgets and scores agree across modules: lowercase, split on any run of
non-alphanumeric characters.
"""

from __future__ import annotations

import re

_TOKEN_RE = re.compile(r"[a-z0-9]+")
_SPAN_RE = re.compile(r"[A-Za-z0-9]+")
# Words plus punctuation clusters; used only for LLM token estimation.
_ESTIMATE_RE = re.compile(r"\w+|[^\w\s]")


def tokenize(text: str) -> list[str]:
    """Lowercase tokens, splitting on any non-alphanumeric run."""
    return _TOKEN_RE.findall(text.lower())


def count_tokens(text: str) -> int:
    return len(_TOKEN_RE.findall(text.lower()))


def truncate_tokens(text: str, budget: int) -> str:
    """Cut `text` after its `budget`-th token, preserving original casing.

    The result tokenizes to at most `budget` tokens. A budget of 0 yields "".
    """
    if budget <= 0:
        return ""
    spans = list(_SPAN_RE.finditer(text))
    if len(spans) <= budget:
        return text
    return text[: spans[budget - 1].end()]


def split_token_chunks(text: str, budget: int) -> list[str]:
    """Split `text` into consecutive pieces of at most `budget` tokens each."""
    if budget <= 0:
        raise ValueError("chunk budget must be positive")
    spans = list(_SPAN_RE.finditer(text))
    if not spans:
        return []
    chunks = []
    start = 0
    for i in range(0, len(spans), budget):
        last = spans[min(i + budget, len(spans)) - 1]
        chunks.append(text[start : last.end()].strip())
        start = last.end()
    return chunks


def split_token_chunks_overlap(text: str, budget: int, overlap: int = 0) -> list[str]:
    """Budget-token chunks where consecutive chunks share `overlap` tokens."""
    if budget <= 0:
        raise ValueError("chunk budget must be positive")
    if not 0 <= overlap < budget:
        raise ValueError("overlap must be in [0, budget)")
    spans = list(_SPAN_RE.finditer(text))
    if not spans:
        return []
    step = budget - overlap
    chunks = []
    i = 0
    while True:
        window = spans[i : i + budget]
        chunks.append(text[window[0].start() : window[-1].end()].strip())
        if i + budget >= len(spans):
            return chunks
        i += step


def estimate_llm_tokens(text: str) -> int:
    """Rough LLM token estimate: word runs plus individual punctuation marks.

    Monotone under concatenation and zero on empty input; no vendor parity.
    """
    return len(_ESTIMATE_RE.findall(text))
