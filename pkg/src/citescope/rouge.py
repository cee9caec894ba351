"""Self-contained ROUGE-1, ROUGE-2 and ROUGE-L scoring.

ROUGE-N pools clipped n-gram matches over all gold summaries
(micro-average); ROUGE-L computes union-LCS recall/precision per gold
summary and macro-averages over golds. Scoring tokenization is lowercase
alphanumeric with stopwords retained and no stemming.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .textproc import split_sentences, tokenize

__all__ = [
    "RougeScore",
    "rouge_n",
    "lcs_union",
    "rouge_l",
    "evaluate_summary",
    "score_tokens",
    "METRICS",
]

METRICS = ("rouge1", "rouge2", "rougeL")


@dataclass(frozen=True)
class RougeScore:
    recall: float
    precision: float
    f1: float
    metric: str

    @staticmethod
    def from_rp(recall: float, precision: float, metric: str) -> "RougeScore":
        recall = min(1.0, max(0.0, recall))
        precision = min(1.0, max(0.0, precision))
        if recall + precision == 0.0:
            f1 = 0.0
        else:
            f1 = 2.0 * recall * precision / (recall + precision)
        return RougeScore(recall=recall, precision=precision, f1=f1, metric=metric)


def score_tokens(text: str) -> list[str]:
    """Scoring tokenization: lowercase alphanumeric, stopwords retained."""
    return tokenize(text)


def _ngrams(tokens: list[str], n: int) -> Counter:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def rouge_n(candidate: list[str], golds: list[list[str]], n: int) -> RougeScore:
    """Clipped n-gram co-occurrence, pooled over the gold summaries."""
    if n < 1:
        raise ValueError("n must be >= 1")
    metric = f"rouge{n}"
    cand_grams = _ngrams(candidate, n)
    cand_total = sum(cand_grams.values())
    match_total = 0
    gold_total = 0
    for gold in golds:
        gold_grams = _ngrams(gold, n)
        gold_total += sum(gold_grams.values())
        match_total += sum(
            min(count, cand_grams.get(gram, 0)) for gram, count in gold_grams.items()
        )
    recall = match_total / gold_total if gold_total else 0.0
    precision = (
        match_total / (len(golds) * cand_total) if golds and cand_total else 0.0
    )
    return RougeScore.from_rp(recall, precision, metric)


def _lcs_positions(reference: list[str], candidate: list[str]) -> set[int]:
    """Indices of ``reference`` covered by one longest common subsequence
    with ``candidate`` (standard DP with backtrack)."""
    m, n = len(reference), len(candidate)
    if m == 0 or n == 0:
        return set()
    dp = [[0] * (n + 1) for _ in range(m + 1)]
    for i in range(1, m + 1):
        row, prev = dp[i], dp[i - 1]
        ri = reference[i - 1]
        for j in range(1, n + 1):
            if ri == candidate[j - 1]:
                row[j] = prev[j - 1] + 1
            else:
                row[j] = row[j - 1] if row[j - 1] >= prev[j] else prev[j]
    positions = set()
    i, j = m, n
    while i > 0 and j > 0:
        if reference[i - 1] == candidate[j - 1] and dp[i][j] == dp[i - 1][j - 1] + 1:
            positions.add(i - 1)
            i -= 1
            j -= 1
        elif dp[i - 1][j] >= dp[i][j - 1]:
            i -= 1
        else:
            j -= 1
    return positions


def lcs_union(gold_sentence: list[str], candidate_sentences: list[list[str]]) -> int:
    """Union-LCS: gold token positions covered by the LCS with any candidate
    sentence, each position counted once."""
    covered: set[int] = set()
    for cand in candidate_sentences:
        covered |= _lcs_positions(gold_sentence, cand)
    return len(covered)


def rouge_l(
    candidate_sentences: list[list[str]],
    gold_summaries: list[list[list[str]]],
) -> RougeScore:
    """Union-LCS recall/precision per gold summary, macro-averaged.

    recall_g = sum_i LCS_u(r_i, C) / sum_i |r_i| over the gold's sentences;
    precision_g uses the candidate token count as denominator.
    """
    n_cand = sum(len(s) for s in candidate_sentences)
    recalls, precisions = [], []
    for gold in gold_summaries:
        hit = sum(lcs_union(r_i, candidate_sentences) for r_i in gold)
        total = sum(len(r_i) for r_i in gold)
        recalls.append(hit / total if total else 0.0)
        precisions.append(hit / n_cand if n_cand else 0.0)
    if not recalls:
        return RougeScore.from_rp(0.0, 0.0, "rougeL")
    recall = sum(recalls) / len(recalls)
    precision = sum(precisions) / len(precisions)
    return RougeScore.from_rp(recall, precision, "rougeL")


def evaluate_summary(
    candidate_sentences: list[str],
    gold_texts: list[str],
    truncate_gold_to: int | None = None,
) -> dict[str, RougeScore]:
    """All three metrics for one candidate against a topic's gold summaries.

    ``truncate_gold_to`` keeps only the first K whitespace words of each
    gold text before scoring (used for the 100-word evaluation).
    """
    golds = list(gold_texts)
    if truncate_gold_to is not None:
        golds = [" ".join(g.split()[:truncate_gold_to]) for g in golds]

    cand_sent_tokens = [score_tokens(s) for s in candidate_sentences]
    cand_tokens = [t for s in cand_sent_tokens for t in s]
    gold_tokens = [score_tokens(g) for g in golds]
    gold_sent_tokens = [
        [score_tokens(s.text) for s in split_sentences(g)] for g in golds
    ]

    return {
        "rouge1": rouge_n(cand_tokens, gold_tokens, 1),
        "rouge2": rouge_n(cand_tokens, gold_tokens, 2),
        "rougeL": rouge_l(cand_sent_tokens, gold_sent_tokens),
    }
