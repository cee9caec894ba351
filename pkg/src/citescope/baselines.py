"""The four comparison summarizers: LSA, LexRank, MMR, and citation summary.

All of them share the lexical primitives of textproc and the centrality
implementation of ranking, and all enforce whole-sentence word budgets.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .corpus import Citation
from .errors import EmptyGraph, EmptyInput
from .grouping import Partition, WeightedGraph, build_span_graph, modularity
from .ranking import DEFAULT_DAMPING, centrality, centrality_from_matrix
from .selection import Summary, truncate_to_budget
from .textproc import (
    IdfTable,
    PivotParams,
    SparseVector,
    cosine,
    vectorize,
)

__all__ = [
    "TermDocMatrix",
    "LsaDecomposition",
    "svd",
    "lsa_summarize",
    "lexrank_summarize",
    "mmr_summarize",
    "citation_summarize",
    "build_term_doc_matrix",
]


@dataclass(frozen=True)
class TermDocMatrix:
    """Dense terms x sentences tf-idf matrix."""

    terms: tuple[str, ...]
    values: np.ndarray  # shape (n_terms, n_sentences)


@dataclass(frozen=True)
class LsaDecomposition:
    """Singular values (non-increasing) with the matching singular vectors."""

    singular_values: np.ndarray  # shape (r,)
    vt: np.ndarray               # shape (r, n_sentences), orthonormal rows
    u: np.ndarray                # shape (n_terms, r), orthonormal columns


def build_term_doc_matrix(
    sentence_tokens: list[list[str]], idf: IdfTable, pivot: PivotParams
) -> tuple[TermDocMatrix, list[SparseVector]]:
    vectors = [vectorize(list(toks), idf, pivot) for toks in sentence_tokens]
    terms = sorted({t for v in vectors for t in v.weights})
    index = {t: i for i, t in enumerate(terms)}
    values = np.zeros((len(terms), len(vectors)))
    for j, v in enumerate(vectors):
        for t, w in v.weights.items():
            values[index[t], j] = w
    return TermDocMatrix(terms=tuple(terms), values=values), vectors


def svd(matrix: TermDocMatrix, sweeps: int = 60, eps: float = 1e-12) -> LsaDecomposition:
    """One-sided Jacobi SVD.

    Rotates column pairs of a working copy of A (accumulating the rotations
    into V) until all columns are mutually orthogonal; singular values are
    the resulting column norms. Sign convention: the largest-magnitude entry
    of each right singular vector is positive.
    """
    a = np.asarray(matrix.values, dtype=float)
    if a.size == 0:
        raise EmptyInput("svd requires a non-empty matrix")
    m, n = a.shape
    w = a.copy()
    v = np.eye(n)

    for _ in range(sweeps):
        off = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                alpha = w[:, p] @ w[:, p]
                beta = w[:, q] @ w[:, q]
                gamma = w[:, p] @ w[:, q]
                denom = np.sqrt(alpha) * np.sqrt(beta)
                if denom == 0.0 or abs(gamma) <= eps * denom:
                    continue
                off = max(off, abs(gamma) / denom)
                zeta = (beta - alpha) / (2.0 * gamma)
                sign = 1.0 if zeta >= 0 else -1.0
                t = sign / (abs(zeta) + np.hypot(1.0, zeta))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = c * t
                wp = w[:, p].copy()
                w[:, p] = c * wp - s * w[:, q]
                w[:, q] = s * wp + c * w[:, q]
                vp = v[:, p].copy()
                v[:, p] = c * vp - s * v[:, q]
                v[:, q] = s * vp + c * v[:, q]
        if off == 0.0:
            break

    norms = np.linalg.norm(w, axis=0)
    order = np.argsort(-norms, kind="stable")
    sigma = norms[order]
    v = v[:, order]
    w = w[:, order]

    u = np.zeros((m, n))
    for j in range(n):
        if sigma[j] > 0:
            u[:, j] = w[:, j] / sigma[j]
        # fix signs so each right singular vector's dominant entry is positive
        k = int(np.argmax(np.abs(v[:, j])))
        if v[k, j] < 0:
            v[:, j] = -v[:, j]
            u[:, j] = -u[:, j]

    return LsaDecomposition(singular_values=sigma, vt=v.T, u=u)


def _budget_pick(order, sentences, budget, method) -> Summary:
    """Take sentence indices in the given order, skipping those that do not
    fit the remaining budget."""
    return truncate_to_budget(
        [(str(i), sentences[i]) for i in order], budget, method=method
    )


def lsa_summarize(
    sentences: list[str],
    sentence_tokens: list[list[str]],
    idf: IdfTable,
    pivot: PivotParams,
    budget: int,
) -> Summary:
    """One sentence per singular vector: for vector i, the not-yet-chosen
    sentence with the largest |V^T[i, .]| entry."""
    if not sentences:
        return Summary(sentences=(), word_count=0, method="lsa")
    matrix, _ = build_term_doc_matrix(sentence_tokens, idf, pivot)
    if matrix.values.size == 0:
        return _budget_pick(range(len(sentences)), sentences, budget, "lsa")
    dec = svd(matrix)
    chosen: list[int] = []
    taken = set()
    for i in range(dec.vt.shape[0]):
        if dec.singular_values[i] <= 0:
            break
        row = np.abs(dec.vt[i])
        ranked = sorted(range(len(sentences)), key=lambda j: (-row[j], j))
        for j in ranked:
            if j not in taken:
                chosen.append(j)
                taken.add(j)
                break
    return _budget_pick(chosen, sentences, budget, "lsa")


def lexrank_summarize(
    sentences: list[str],
    sentence_tokens: list[list[str]],
    idf: IdfTable,
    pivot: PivotParams,
    budget: int,
    damping: float = DEFAULT_DAMPING,
) -> Summary:
    """Sentences in descending damped-centrality order until the budget."""
    if not sentences:
        return Summary(sentences=(), word_count=0, method="lexrank")
    vectors = [vectorize(list(toks), idf, pivot) for toks in sentence_tokens]
    n = len(sentences)
    sim = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            sim[i, j] = sim[j, i] = cosine(vectors[i], vectors[j])
    p, _, _ = centrality_from_matrix(sim, damping=damping)
    order = sorted(range(n), key=lambda i: (-p[i], i))
    return _budget_pick(order, sentences, budget, "lexrank")


def mmr_summarize(
    sentences: list[str],
    sentence_tokens: list[list[str]],
    idf: IdfTable,
    pivot: PivotParams,
    budget: int,
    lam: float = 0.5,
) -> Summary:
    """Greedy MMR over all document sentences; Sim1 is the cosine to the
    document centroid, Sim2 the max cosine to the selected set."""
    if not sentences:
        return Summary(sentences=(), word_count=0, method="mmr")
    vectors = [vectorize(list(toks), idf, pivot) for toks in sentence_tokens]
    centroid = SparseVector.centroid(vectors)
    relevance = [cosine(v, centroid) for v in vectors]

    picked: list[int] = []
    words = 0
    remaining = list(range(len(sentences)))
    from .textproc import word_count as wc

    while remaining:
        fitting = [i for i in remaining if words + wc(sentences[i]) <= budget]
        if not fitting:
            break
        best = max(
            fitting,
            key=lambda i: (
                lam * relevance[i]
                - (1.0 - lam)
                * max((cosine(vectors[i], vectors[j]) for j in picked), default=0.0),
                -i,
            ),
        )
        picked.append(best)
        words += wc(sentences[best])
        remaining.remove(best)
    return _budget_pick(picked, sentences, budget, f"mmr_{lam}")


def _average_link_clusters(vectors: list[SparseVector]) -> list[list[int]]:
    """Average-link agglomerative merging; the dendrogram is cut at the merge
    whose induced partition maximizes modularity of the similarity graph."""
    n = len(vectors)
    sim = [[cosine(vectors[i], vectors[j]) for j in range(n)] for i in range(n)]

    graph = WeightedGraph(list(range(n)))
    for i in range(n):
        for j in range(i + 1, n):
            if sim[i][j] > 0:
                graph.add_edge(i, j, sim[i][j])

    clusters: list[list[int]] = [[i] for i in range(n)]
    best_partition = [list(c) for c in clusters]
    if graph.m > 0:
        best_q = modularity(
            graph, Partition({i: ci for ci, c in enumerate(clusters) for i in c})
        )
    else:
        return best_partition

    while len(clusters) > 1:
        best_pair, best_sim = None, -1.0
        for a in range(len(clusters)):
            for b in range(a + 1, len(clusters)):
                link = sum(sim[i][j] for i in clusters[a] for j in clusters[b]) / (
                    len(clusters[a]) * len(clusters[b])
                )
                if link > best_sim + 1e-12:
                    best_pair, best_sim = (a, b), link
        a, b = best_pair
        clusters[a] = clusters[a] + clusters[b]
        del clusters[b]
        q = modularity(
            graph, Partition({i: ci for ci, c in enumerate(clusters) for i in c})
        )
        if q > best_q + 1e-12:
            best_q = q
            best_partition = [list(c) for c in clusters]
    return best_partition


def citation_summarize(
    citations: list[Citation],
    idf: IdfTable,
    pivot: PivotParams,
    budget: int,
    stopwords: frozenset[str] = frozenset(),
) -> Summary:
    """Cluster the citation texts, rank within clusters by centrality, and
    round-robin from the largest cluster down until the budget."""
    if not citations:
        raise EmptyInput("citation summary requires at least one citation")
    from .textproc import tokenize

    token_lists = [
        tokenize(c.text, stopwords=stopwords, drop_numeric=True) for c in citations
    ]
    vectors = [vectorize(toks, idf, pivot) for toks in token_lists]
    clusters = _average_link_clusters(vectors)

    # rank inside each cluster by centrality of the cluster subgraph
    ranked_clusters: list[list[int]] = []
    for cluster in clusters:
        if len(cluster) == 1:
            ranked_clusters.append(cluster)
            continue
        k = len(cluster)
        sim = np.zeros((k, k))
        for a in range(k):
            for b in range(a + 1, k):
                sim[a, b] = sim[b, a] = cosine(vectors[cluster[a]], vectors[cluster[b]])
        p, _, _ = centrality_from_matrix(sim)
        ranked_clusters.append(
            [cluster[i] for i in sorted(range(k), key=lambda i: (-p[i], cluster[i]))]
        )
    ranked_clusters.sort(key=lambda c: (-len(c), c[0]))

    order: list[int] = []
    rank = 0
    while any(rank < len(c) for c in ranked_clusters):
        for cluster in ranked_clusters:
            if rank < len(cluster):
                order.append(cluster[rank])
        rank += 1
    return truncate_to_budget(
        [(citations[i].id, citations[i].text) for i in order], budget, method="citation"
    )
