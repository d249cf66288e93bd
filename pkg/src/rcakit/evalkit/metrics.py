"""Lexical and semantic similarity metrics.

All lexical metrics share the workbench tokenizer. Conventions that the
frozen test values depend on:

- BLEU uses modified n-gram precisions for n = 1..bleu_max_n, a geometric
  mean taken only over orders where the candidate has at least one n-gram,
  and brevity penalty exp(1 - r/c) when c <= r. With add_one smoothing,
  orders n >= 2 get (matches+1)/(total+1); order 1 is never smoothed, so
  token-disjoint pairs still score 0.
- Corpus BLEU pools n-gram counts (and lengths) over all pairs before
  computing precisions; a singleton list therefore equals sentence BLEU.
- ROUGE-L combines LCS precision/recall with an F-beta where beta weights
  recall (beta=1 gives F1).
- METEOR-lite aligns exact unigrams only: m = sum of per-token minimum
  counts, Fmean = P*R / (alpha*P + (1-alpha)*R), penalty = gamma *
  (chunks/m)^beta_exp, score = Fmean * (1 - penalty). Chunks are counted on
  a greedy left-to-right alignment of prediction tokens to the earliest
  unmatched reference position.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

from ..retrieval.base import Embedder, cosine
from ..text import tokenize


@dataclass(frozen=True)
class MetricConfig:
    bleu_max_n: int = 4
    smoothing: str = "add_one"
    rouge_beta: float = 1.0
    meteor_alpha: float = 0.9
    meteor_gamma: float = 0.5
    meteor_beta_exp: float = 3.0

    def __post_init__(self) -> None:
        if self.bleu_max_n < 1:
            raise ValueError("bleu_max_n must be >= 1")
        if self.smoothing not in ("none", "add_one"):
            raise ValueError(f"unknown smoothing {self.smoothing!r}")
        if not 0.0 <= self.meteor_alpha <= 1.0:
            raise ValueError("meteor_alpha must be in [0, 1]")
        if not 0.0 <= self.meteor_gamma <= 1.0:
            raise ValueError("meteor_gamma must be in [0, 1]")
        if self.rouge_beta < 0:
            raise ValueError("rouge_beta must be >= 0")


def _ngrams(tokens: list[str], n: int) -> Counter:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def _bleu_from_counts(
    matches: list[int], totals: list[int], c: int, r: int, config: MetricConfig
) -> float:
    """Shared BLEU core over per-order match/total counts and lengths."""
    if c == 0:
        return 0.0
    log_sum = 0.0
    orders = 0
    for n in range(1, config.bleu_max_n + 1):
        total = totals[n - 1]
        if total == 0:
            continue  # no candidate n-grams of this order: skip the order
        match = matches[n - 1]
        if config.smoothing == "add_one" and n >= 2:
            precision = (match + 1) / (total + 1)
        else:
            if match == 0:
                return 0.0
            precision = match / total
        log_sum += math.log(precision)
        orders += 1
    if orders == 0:
        return 0.0
    geo_mean = math.exp(log_sum / orders)
    bp = 1.0 if c > r else math.exp(1.0 - r / c)
    return bp * geo_mean


def _pair_counts(
    pred_tokens: list[str], ref_tokens: list[str], max_n: int
) -> tuple[list[int], list[int]]:
    matches, totals = [], []
    for n in range(1, max_n + 1):
        pred_grams = _ngrams(pred_tokens, n)
        ref_grams = _ngrams(ref_tokens, n)
        matches.append(sum(min(count, ref_grams[g]) for g, count in pred_grams.items()))
        totals.append(sum(pred_grams.values()))
    return matches, totals


def sentence_bleu(
    prediction: str, reference: str, config: MetricConfig | None = None
) -> float:
    config = config or MetricConfig()
    pred_tokens = tokenize(prediction)
    ref_tokens = tokenize(reference)
    matches, totals = _pair_counts(pred_tokens, ref_tokens, config.bleu_max_n)
    return _bleu_from_counts(
        matches, totals, len(pred_tokens), len(ref_tokens), config
    )


def corpus_bleu(
    predictions: list[str], references: list[str], config: MetricConfig | None = None
) -> float:
    if len(predictions) != len(references):
        raise ValueError(
            f"got {len(predictions)} predictions for {len(references)} references"
        )
    config = config or MetricConfig()
    matches = [0] * config.bleu_max_n
    totals = [0] * config.bleu_max_n
    c = r = 0
    for prediction, reference in zip(predictions, references):
        pred_tokens = tokenize(prediction)
        ref_tokens = tokenize(reference)
        c += len(pred_tokens)
        r += len(ref_tokens)
        pair_matches, pair_totals = _pair_counts(
            pred_tokens, ref_tokens, config.bleu_max_n
        )
        for i in range(config.bleu_max_n):
            matches[i] += pair_matches[i]
            totals[i] += pair_totals[i]
    return _bleu_from_counts(matches, totals, c, r, config)


def _lcs_length(a: list[str], b: list[str]) -> int:
    if not a or not b:
        return 0
    previous = [0] * (len(b) + 1)
    for token in a:
        current = [0]
        for j, other in enumerate(b, 1):
            if token == other:
                current.append(previous[j - 1] + 1)
            else:
                current.append(max(previous[j], current[j - 1]))
        previous = current
    return previous[-1]


def rouge_l(
    prediction: str, reference: str, config: MetricConfig | None = None
) -> float:
    config = config or MetricConfig()
    pred_tokens = tokenize(prediction)
    ref_tokens = tokenize(reference)
    lcs = _lcs_length(pred_tokens, ref_tokens)
    if lcs == 0:
        return 0.0
    precision = lcs / len(pred_tokens)
    recall = lcs / len(ref_tokens)
    beta_sq = config.rouge_beta**2
    return (1 + beta_sq) * precision * recall / (recall + beta_sq * precision)


def _meteor_chunks(pred_tokens: list[str], ref_tokens: list[str]) -> tuple[int, int]:
    """Greedy exact alignment; returns (matches, chunks).

    Each prediction token is aligned to the earliest unmatched occurrence of
    the same token in the reference, left to right. A chunk is a maximal run
    of alignments that are adjacent in both strings.
    """
    used = [False] * len(ref_tokens)
    alignment: list[tuple[int, int]] = []  # (prediction index, reference index)
    for i, token in enumerate(pred_tokens):
        for j, other in enumerate(ref_tokens):
            if not used[j] and other == token:
                used[j] = True
                alignment.append((i, j))
                break
    matches = len(alignment)
    if matches == 0:
        return 0, 0
    chunks = 1
    for (prev_i, prev_j), (cur_i, cur_j) in zip(alignment, alignment[1:]):
        if cur_i != prev_i + 1 or cur_j != prev_j + 1:
            chunks += 1
    return matches, chunks


def meteor_lite(
    prediction: str, reference: str, config: MetricConfig | None = None
) -> float:
    config = config or MetricConfig()
    pred_tokens = tokenize(prediction)
    ref_tokens = tokenize(reference)
    if not pred_tokens or not ref_tokens:
        return 0.0
    matches, chunks = _meteor_chunks(pred_tokens, ref_tokens)
    if matches == 0:
        return 0.0
    precision = matches / len(pred_tokens)
    recall = matches / len(ref_tokens)
    alpha = config.meteor_alpha
    fmean = (
        precision * recall / (alpha * precision + (1 - alpha) * recall)
    )
    penalty = config.meteor_gamma * (chunks / matches) ** config.meteor_beta_exp
    return fmean * (1.0 - penalty)


def semantic_similarity(prediction: str, reference: str, embedder: Embedder) -> float:
    """Document-embedding cosine in [-1, 1]."""
    return cosine(embedder.embed(prediction), embedder.embed(reference))
