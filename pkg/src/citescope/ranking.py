"""Sentence centrality by the damped power method.

The transition matrix is A = d*U + (1-d)*B where U is the uniform matrix
and B the row-stochastic normalization of the similarity matrix (zero rows
replaced by uniform rows). The stationary vector of A^T is the centrality.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptyGraph, NoConvergence
from .grouping import WeightedGraph

__all__ = ["CentralityScores", "centrality", "centrality_from_matrix"]

DEFAULT_DAMPING = 0.1
DEFAULT_TOL = 1e-8
DEFAULT_MAX_ITER = 1000


@dataclass(frozen=True)
class CentralityScores:
    score: dict
    iterations: int
    residual: float


def centrality_from_matrix(
    sim: np.ndarray,
    damping: float = DEFAULT_DAMPING,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> tuple[np.ndarray, int, float]:
    """Power iteration on a raw similarity matrix; returns (p, iters, residual)."""
    if not 0.0 <= damping < 1.0:
        raise ValueError(f"damping must be in [0, 1), got {damping}")
    n = sim.shape[0]
    if n == 0:
        raise EmptyGraph("centrality requires a non-empty graph")
    if n == 1:
        return np.array([1.0]), 0, 0.0

    row_sums = sim.sum(axis=1)
    b = np.empty_like(sim, dtype=float)
    uniform = np.full(n, 1.0 / n)
    for i in range(n):
        b[i] = sim[i] / row_sums[i] if row_sums[i] > 0 else uniform
    a = damping / n + (1.0 - damping) * b

    p = np.full(n, 1.0 / n)
    at = a.T
    residual = np.inf
    for it in range(1, max_iter + 1):
        p_next = at @ p
        p_next /= p_next.sum()  # guard against drift
        residual = float(np.abs(p_next - p).sum())
        p = p_next
        if residual <= tol:
            return p, it, residual
    raise NoConvergence(max_iter, residual)


def centrality(
    graph: WeightedGraph,
    damping: float = DEFAULT_DAMPING,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> CentralityScores:
    """Centrality of every node of the similarity graph; scores sum to 1."""
    nodes = list(graph.nodes)
    if not nodes:
        raise EmptyGraph("centrality requires a non-empty graph")
    index = {v: i for i, v in enumerate(nodes)}
    sim = np.zeros((len(nodes), len(nodes)))
    for v in nodes:
        for w, weight in graph.neighbors(v):
            sim[index[v], index[w]] = weight
    p, iterations, residual = centrality_from_matrix(
        sim, damping=damping, tol=tol, max_iter=max_iter
    )
    return CentralityScores(
        score={v: float(p[index[v]]) for v in nodes},
        iterations=iterations,
        residual=residual,
    )
